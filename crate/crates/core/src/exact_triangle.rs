//! Rank-level solver for surgery exact triangles
//! `A --f--> B --g--> C --h--> A` over graded `Z[U]`-modules.
//!
//! Unrolled, the triangle is a chain of grading slices
//! `A_x -> B_{x+s0} -> C_{x+s0+s1} -> A_{x+S} -> …` with `S = s0+s1+s2 < 0`.
//! Below every summand the chain is zero, so exactness pins every map rank
//! from the bottom up. A configuration is accepted when those ranks are
//! non-negative, periodic above all summands, compatible with `U` on every
//! arrow, and satisfy the declared hypotheses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::graded_module::{format_grading, grading, half, GradedUModule, Grading};

pub const DEFAULT_BUDGET: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    AB,
    BC,
    CA,
}

impl Arrow {
    pub const ALL: [Arrow; 3] = [Arrow::AB, Arrow::BC, Arrow::CA];

    /// Index of the source term.
    pub fn source(self) -> usize {
        match self {
            Arrow::AB => 0,
            Arrow::BC => 1,
            Arrow::CA => 2,
        }
    }

    fn from_source(t: usize) -> Self {
        Self::ALL[t % 3]
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arrow::AB => "AB",
            Arrow::BC => "BC",
            Arrow::CA => "CA",
        })
    }
}

impl FromStr for Arrow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "AB" => Ok(Arrow::AB),
            "BC" => Ok(Arrow::BC),
            "CA" => Ok(Arrow::CA),
            other => Err(Error::TriangleSpec(format!("unknown arrow `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Zero,
    Nonzero,
}

/// A declared fact about the arrow's rank at a source grading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub arrow: Arrow,
    pub grading: Grading,
    pub constraint: Constraint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Known(GradedUModule),
    Unknown,
}

impl Term {
    fn known(&self) -> Option<&GradedUModule> {
        match self {
            Term::Known(m) => Some(m),
            Term::Unknown => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleSpec {
    pub terms: [Term; 3],
    /// Degree shifts of `A->B`, `B->C`, `C->A`.
    pub shifts: [Grading; 3],
    pub hypotheses: Vec<Hypothesis>,
    pub window: (Grading, Grading),
    /// Number of towers the unknown term must carry, when known
    /// (1 for an integral homology sphere, 2 when `b1 = 1`).
    pub unknown_towers: Option<usize>,
}

impl TriangleSpec {
    /// Integer-surgery defaults: both middle arrows lower grading by 1/2 and
    /// the connecting arrow makes the round trip drop by 1.
    pub fn default_shifts() -> [Grading; 3] {
        [half(-1), half(-1), grading(0)]
    }

    pub fn default_window() -> (Grading, Grading) {
        (grading(-6), grading(6))
    }

    pub fn new(a: Term, b: Term, c: Term) -> Self {
        Self {
            terms: [a, b, c],
            shifts: Self::default_shifts(),
            hypotheses: Vec::new(),
            window: Self::default_window(),
            unknown_towers: None,
        }
    }

    pub fn with_hypothesis(mut self, arrow: Arrow, at: Grading, constraint: Constraint) -> Self {
        self.hypotheses.push(Hypothesis { arrow, grading: at, constraint });
        self
    }

    pub fn with_window(mut self, lo: Grading, hi: Grading) -> Self {
        self.window = (lo, hi);
        self
    }

    pub fn with_unknown_towers(mut self, towers: usize) -> Self {
        self.unknown_towers = Some(towers);
        self
    }

    fn unknown_index(&self) -> Option<usize> {
        self.terms.iter().position(|t| *t == Term::Unknown)
    }

    fn validate(&self, unknowns: usize) -> Result<()> {
        let found = self.terms.iter().filter(|t| **t == Term::Unknown).count();
        if found != unknowns {
            return Err(Error::TriangleSpec(format!("expected {unknowns} unknown term(s), found {found}")));
        }
        let total: Grading = self.shifts.iter().copied().sum();
        if !total.is_negative() {
            return Err(Error::TriangleSpec(format!(
                "arrow shifts must sum to a negative value, got {}",
                format_grading(total)
            )));
        }
        let (lo, hi) = self.window;
        if lo >= hi {
            return Err(Error::TriangleSpec("empty window".into()));
        }
        let slack = grading(2);
        for m in self.terms.iter().filter_map(Term::known) {
            for f in m.features() {
                if f < lo + slack || f > hi - slack {
                    return Err(Error::WindowTooSmall { lo, hi, at: f });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub verdict: Verdict,
    /// Map ranks at source gradings inside the window (consistent case).
    pub ranks: BTreeMap<(Arrow, Grading), usize>,
    /// Why the configuration was rejected.
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Unique,
    Multiple,
    Inconsistent,
    WindowLimited,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Unique => "unique",
            SolveStatus::Multiple => "multiple",
            SolveStatus::Inconsistent => "inconsistent",
            SolveStatus::WindowLimited => "window_limited",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub candidates: Vec<GradedUModule>,
    pub status: SolveStatus,
}

/// `x mod m` for positive rational `m`, in `[0, m)`.
fn rem_rational(x: Grading, m: Grading) -> Grading {
    x - m * (x / m).floor()
}

struct Chains<'a> {
    modules: [&'a GradedUModule; 3],
    shifts: [Grading; 3],
}

impl Chains<'_> {
    fn total(&self) -> Grading {
        self.shifts.iter().copied().sum()
    }

    /// Grading of the `A` slice that starts the cycle through `(t, x)`.
    fn a_equivalent(&self, t: usize, x: Grading) -> Grading {
        x - self.shifts[..t].iter().copied().sum::<Grading>()
    }

    /// Number of chain cycles after which tower slices repeat.
    fn period(&self) -> i64 {
        let step = -self.total();
        let twice_denom = 2 * step.denom();
        twice_denom / step.numer().gcd(&twice_denom)
    }

    /// Pins every map rank from the zero bottom of each chain.
    /// Keys are `(source term, source grading)`.
    fn ranks(&self) -> std::result::Result<BTreeMap<(usize, Grading), usize>, String> {
        let step = -self.total();
        let period = self.period();
        let mut keys = BTreeSet::new();
        let mut lowest: Option<Grading> = None;
        let mut highest: Option<Grading> = None;
        for (t, m) in self.modules.iter().enumerate() {
            let mut points: Vec<Grading> = m.finites().to_vec();
            for &s in m.towers() {
                points.extend((0..period).map(|k| s + grading(2 * k)));
            }
            for p in points {
                let a = self.a_equivalent(t, p);
                keys.insert(rem_rational(a, step));
                lowest = Some(lowest.map_or(a, |l| l.min(a)));
                highest = Some(highest.map_or(a, |h| h.max(a)));
            }
        }
        let (Some(lowest), Some(highest)) = (lowest, highest) else {
            return Ok(BTreeMap::new());
        };
        let top = highest + step * grading(2 * period + 3);

        let mut out = BTreeMap::new();
        for key in keys {
            let start = key + step * ((lowest - key) / step).floor() - step;
            let cycles = ((top - start) / step).ceil().to_integer();
            // positions in descending grading order
            let mut positions = Vec::with_capacity(3 * cycles as usize + 3);
            for j in (0..=cycles).rev() {
                let mut x = start + step * grading(j);
                for t in 0..3 {
                    positions.push((t, x));
                    x += self.shifts[t];
                }
            }
            let dims: Vec<usize> = positions.iter().map(|&(t, x)| self.modules[t].rank_at(x)).collect();
            let n = positions.len();
            let mut r = vec![0i64; n];
            for i in (1..n).rev() {
                r[i - 1] = dims[i] as i64 - r[i];
                if r[i - 1] < 0 {
                    let (t, x) = positions[i];
                    return Err(format!(
                        "exactness fails at term {} grading {}",
                        "ABC".as_bytes()[t] as char,
                        format_grading(x)
                    ));
                }
            }
            if (dims[0] as i64) < r[0] {
                return Err("exactness fails at the top of the window".into());
            }
            let span = 6 * period as usize;
            if r[0] != r[span] {
                return Err("tower ranks do not form an exact localized triangle".into());
            }
            for (i, &(t, x)) in positions.iter().enumerate() {
                out.insert((t, x), r[i] as usize);
            }
        }
        Ok(out)
    }

    /// `rank(U ∘ φ_x)` and `rank(φ_{x-2} ∘ U)` must be able to agree.
    fn check_u_equivariance(&self, ranks: &BTreeMap<(usize, Grading), usize>) -> std::result::Result<(), String> {
        let rank = |t: usize, x: Grading| ranks.get(&(t, x)).copied().unwrap_or(0) as i64;
        for &(t, x) in ranks.keys() {
            let src = self.modules[t];
            let tgt = self.modules[(t + 1) % 3];
            let y = x + self.shifts[t];
            let r1 = rank(t, x);
            let r0 = rank(t, x - 2);
            let (dim_y, u_y) = (tgt.rank_at(y) as i64, tgt.u_rank_at(y) as i64);
            let (dim_x0, u_x) = (src.rank_at(x - 2) as i64, src.u_rank_at(x) as i64);
            let lo = 0.max(r1 + u_y - dim_y).max(u_x + r0 - dim_x0);
            let hi = r1.min(u_y).min(r0).min(u_x);
            if lo > hi {
                return Err(format!(
                    "arrow {} is not U-equivariant at grading {}",
                    Arrow::from_source(t),
                    format_grading(x)
                ));
            }
        }
        Ok(())
    }

    fn evaluate(&self, hypotheses: &[Hypothesis]) -> std::result::Result<BTreeMap<(usize, Grading), usize>, String> {
        let ranks = self.ranks()?;
        self.check_u_equivariance(&ranks)?;
        for h in hypotheses {
            let r = ranks.get(&(h.arrow.source(), h.grading)).copied().unwrap_or(0);
            let ok = match h.constraint {
                Constraint::Zero => r == 0,
                Constraint::Nonzero => r > 0,
            };
            if !ok {
                return Err(format!("hypothesis on {} at {} violated", h.arrow, format_grading(h.grading)));
            }
        }
        Ok(ranks)
    }
}

/// Verdict for a triangle whose three terms are all known.
pub fn check_exactness(spec: &TriangleSpec) -> Result<ExactnessReport> {
    spec.validate(0)?;
    let modules = [0, 1, 2].map(|i| spec.terms[i].known().expect("validated"));
    let chains = Chains { modules, shifts: spec.shifts };
    Ok(match chains.evaluate(&spec.hypotheses) {
        Ok(ranks) => {
            let (lo, hi) = spec.window;
            let ranks = ranks
                .into_iter()
                .filter(|((t, x), _)| *x >= lo && *x <= hi && modules[*t].rank_at(*x) > 0)
                .map(|((t, x), r)| ((Arrow::from_source(t), x), r))
                .collect();
            ExactnessReport { verdict: Verdict::Consistent, ranks, reason: None }
        }
        Err(reason) => ExactnessReport { verdict: Verdict::Inconsistent, ranks: BTreeMap::new(), reason: Some(reason) },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Summand {
    Tower(Grading),
    Finite(Grading),
}

struct Search<'a> {
    spec: &'a TriangleSpec,
    unknown: usize,
    known: [GradedUModule; 3],
    options: Vec<Summand>,
    grid: Vec<Grading>,
    bounds: Vec<usize>,
    budget: usize,
    exhausted: bool,
    found: BTreeSet<GradedUModule>,
}

impl Search<'_> {
    fn fits(&self, m: &GradedUModule) -> bool {
        if let Some(t) = self.spec.unknown_towers {
            if m.towers().len() > t {
                return false;
            }
        }
        self.grid.iter().zip(&self.bounds).all(|(&g, &b)| m.rank_at(g) <= b)
    }

    fn with(m: &GradedUModule, s: Summand) -> GradedUModule {
        match s {
            Summand::Tower(g) => m.direct_sum(&GradedUModule::tower(g)),
            Summand::Finite(g) => m.direct_sum(&GradedUModule::finite(g)),
        }
    }

    fn accept(&mut self, m: &GradedUModule) {
        if let Some(t) = self.spec.unknown_towers {
            if m.towers().len() != t {
                return;
            }
        }
        let mut modules = self.known.clone();
        modules[self.unknown] = m.clone();
        let chains = Chains { modules: [&modules[0], &modules[1], &modules[2]], shifts: self.spec.shifts };
        if chains.evaluate(&self.spec.hypotheses).is_ok() {
            self.found.insert(m.clone());
        }
    }

    fn descend(&mut self, current: GradedUModule, start: usize) {
        self.accept(&current);
        for i in start..self.options.len() {
            let next = Self::with(&current, self.options[i]);
            if !self.fits(&next) {
                continue;
            }
            if current.summand_count() == self.budget {
                self.exhausted = true;
                return;
            }
            self.descend(next, i);
        }
    }
}

/// Enumerates every module with at most `budget` summands on the half-integer
/// lattice of the window that completes the triangle.
pub fn solve_unknown(spec: &TriangleSpec, budget: usize) -> Result<SolveResult> {
    spec.validate(1)?;
    let unknown = spec.unknown_index().expect("validated");
    let known = [0, 1, 2].map(|i| spec.terms[i].known().cloned().unwrap_or_default());
    let prev = (unknown + 2) % 3;
    let next = (unknown + 1) % 3;
    let (lo, hi) = spec.window;

    // exactness at the unknown: dim <= (incoming source) + (outgoing target)
    let bound = |y: Grading| known[prev].rank_at(y - spec.shifts[prev]) + known[next].rank_at(y + spec.shifts[unknown]);
    let top = hi + grading(8);
    let mut grid = Vec::new();
    let mut y = (lo * 2).ceil() / 2;
    while y <= top {
        grid.push(y);
        y += half(1);
    }
    let bounds: Vec<usize> = grid.iter().map(|&g| bound(g)).collect();
    let mut options = Vec::new();
    for (i, &g) in grid.iter().enumerate().filter(|(_, g)| **g <= hi) {
        if bounds[i] == 0 {
            continue;
        }
        let tower_ok =
            grid.iter().zip(&bounds).all(|(&h, &b)| !(h >= g && (h - g) / 2 == ((h - g) / 2).floor()) || b > 0);
        if tower_ok && spec.unknown_towers != Some(0) {
            options.push(Summand::Tower(g));
        }
        options.push(Summand::Finite(g));
    }

    let mut search =
        Search { spec, unknown, known, options, grid, bounds, budget, exhausted: false, found: BTreeSet::new() };
    search.descend(GradedUModule::zero(), 0);

    let candidates: Vec<GradedUModule> = search.found.into_iter().collect();
    let near_edge = |m: &GradedUModule| m.features().iter().any(|&f| f < lo + 2 || f > hi - 2);
    let status = match candidates.len() {
        0 if search.exhausted => return Err(Error::BudgetExhausted(budget)),
        0 => SolveStatus::Inconsistent,
        _ if candidates.iter().any(near_edge) => SolveStatus::WindowLimited,
        1 => SolveStatus::Unique,
        _ => SolveStatus::Multiple,
    };
    Ok(SolveResult { candidates, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> GradedUModule {
        s.parse().unwrap()
    }

    fn known(s: &str) -> Term {
        Term::Known(m(s))
    }

    #[test]
    fn delta_sequence_is_consistent() {
        let spec =
            TriangleSpec::new(known("T+(0) + Z(0) + Z(0)"), known("T+(1/2) + T+(-1/2)"), known("T+(0) + Z(0) + Z(0)"));
        let r = check_exactness(&spec).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent, "{:?}", r.reason);
        assert_eq!(r.ranks[&(Arrow::AB, grading(0))], 1);
        assert_eq!(r.ranks[&(Arrow::CA, grading(0))], 2);
    }

    #[test]
    fn small_triangles() {
        let iso = TriangleSpec::new(known("T+(0)"), known("0"), known("T+(0)"));
        assert_eq!(check_exactness(&iso).unwrap().verdict, Verdict::Consistent);
        let lonely = TriangleSpec::new(known("T+(0)"), known("0"), known("0"));
        assert_eq!(check_exactness(&lonely).unwrap().verdict, Verdict::Inconsistent);
        let finite = TriangleSpec::new(known("Z(0)"), known("Z(-1/2)"), known("0"));
        assert_eq!(check_exactness(&finite).unwrap().verdict, Verdict::Consistent);
    }

    #[test]
    fn malformed_triangles_are_rejected() {
        let spec = TriangleSpec::new(known("T+(0)"), Term::Unknown, known("T+(5)"));
        assert!(matches!(solve_unknown(&spec, 6), Err(Error::WindowTooSmall { .. })));
        let spec = TriangleSpec::new(known("T+(0)"), known("0"), known("T+(0)"));
        assert!(matches!(solve_unknown(&spec, 6), Err(Error::TriangleSpec(_))));
        let mut spec = TriangleSpec::new(known("T+(0)"), known("0"), known("T+(0)"));
        spec.shifts = [half(1), half(-1), grading(0)];
        assert!(matches!(check_exactness(&spec), Err(Error::TriangleSpec(_))));
    }

    #[test]
    fn zero_module_is_the_only_filler_between_zeros() {
        let spec = TriangleSpec::new(known("0"), Term::Unknown, known("0"));
        let r = solve_unknown(&spec, 6).unwrap();
        assert_eq!(r.status, SolveStatus::Unique);
        assert_eq!(r.candidates, vec![GradedUModule::zero()]);
    }

    #[test]
    fn zero_surgery_term() {
        let spec = TriangleSpec::new(known("T+(0)"), Term::Unknown, known("T+(0) + Z(-1) + Z(-1)")).with_hypothesis(
            Arrow::AB,
            grading(0),
            Constraint::Nonzero,
        );
        let r = solve_unknown(&spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.status, SolveStatus::Unique, "{:?}", r.candidates);
        assert_eq!(r.candidates[0], m("T+(1/2) + T+(-1/2) + Z(-1/2) + Z(-1/2)"));
    }

    #[test]
    fn zero_surgery_term_needs_the_hypothesis() {
        let spec = TriangleSpec::new(known("T+(0)"), Term::Unknown, known("T+(0) + Z(-1) + Z(-1)"));
        let r = solve_unknown(&spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.status, SolveStatus::Multiple, "{:?}", r.candidates);
    }

    #[test]
    fn minus_one_surgery() {
        let spec = TriangleSpec::new(Term::Unknown, known("T+(1/2) + T+(-1/2) + Z(-1/2) + Z(-1/2)"), known("T+(0)"))
            .with_hypothesis(Arrow::CA, grading(0), Constraint::Zero);
        let r = solve_unknown(&spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.status, SolveStatus::Unique, "{:?}", r.candidates);
        assert_eq!(r.candidates[0], m("T+(0) + Z(0) + Z(0)"));
    }

    fn beta_spec() -> TriangleSpec {
        TriangleSpec::new(Term::Unknown, known("T+(1/2) + T+(-1/2) + Z(-1/2)"), known("T+(0) + Z(0)"))
    }

    #[test]
    fn beta_sequence_with_one_tower() {
        let r = solve_unknown(&beta_spec().with_unknown_towers(1), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.status, SolveStatus::Unique, "{:?}", r.candidates);
        assert_eq!(r.candidates[0], m("T+(0) + Z(0) + Z(0)"));
    }

    #[test]
    fn beta_sequence_without_tower_count_is_ambiguous() {
        let r = solve_unknown(&beta_spec(), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.status, SolveStatus::Multiple);
        assert!(r.candidates.contains(&m("T+(0) + Z(0) + Z(0)")));
        assert!(r.candidates.iter().filter(|c| c.towers().len() == 1).count() == 1);
    }

    fn chases() -> Vec<(TriangleSpec, GradedUModule)> {
        vec![
            (
                TriangleSpec::new(known("T+(0)"), Term::Unknown, known("T+(0) + Z(-1) + Z(-1)")).with_hypothesis(
                    Arrow::AB,
                    grading(0),
                    Constraint::Nonzero,
                ),
                m("T+(1/2) + T+(-1/2) + Z(-1/2) + Z(-1/2)"),
            ),
            (
                TriangleSpec::new(Term::Unknown, known("T+(1/2) + T+(-1/2) + Z(-1/2) + Z(-1/2)"), known("T+(0)"))
                    .with_hypothesis(Arrow::CA, grading(0), Constraint::Zero),
                m("T+(0) + Z(0) + Z(0)"),
            ),
            (beta_spec().with_unknown_towers(1), m("T+(0) + Z(0) + Z(0)")),
        ]
    }

    #[test]
    fn candidates_pass_the_checker() {
        for (spec, _) in chases() {
            let r = solve_unknown(&spec, DEFAULT_BUDGET).unwrap();
            for c in r.candidates {
                let mut filled = spec.clone();
                let i = filled.unknown_index().unwrap();
                filled.terms[i] = Term::Known(c);
                filled.unknown_towers = None;
                assert_eq!(check_exactness(&filled).unwrap().verdict, Verdict::Consistent);
            }
        }
    }

    #[test]
    fn larger_window_keeps_answers() {
        for (spec, expected) in chases() {
            let wide = spec.with_window(grading(-9), grading(9));
            let r = solve_unknown(&wide, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.status, SolveStatus::Unique);
            assert_eq!(r.candidates, vec![expected]);
        }
    }

    #[test]
    fn tiny_budget_is_reported() {
        let spec = TriangleSpec::new(known("T+(0)"), Term::Unknown, known("T+(0) + Z(-1) + Z(-1)")).with_hypothesis(
            Arrow::AB,
            grading(0),
            Constraint::Nonzero,
        );
        assert_eq!(solve_unknown(&spec, 1), Err(Error::BudgetExhausted(1)));
    }
}
