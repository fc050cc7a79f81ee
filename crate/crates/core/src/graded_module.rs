//! Finitely described graded `Z[U]`-modules: sums of towers `T+(s)` and
//! U-torsion summands `Z(g)`, plus symbolic U-equivariant maps between them.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;

pub type Grading = Rational64;

pub fn grading(n: i64) -> Grading {
    Grading::from_integer(n)
}

pub fn half(n: i64) -> Grading {
    Grading::new(n, 2)
}

pub(crate) fn is_even_integer(x: Grading) -> bool {
    x.is_integer() && x.to_integer().rem_euclid(2) == 0
}

pub fn format_grading(g: Grading) -> String {
    if g.is_integer() {
        g.to_integer().to_string()
    } else {
        format!("{}/{}", g.numer(), g.denom())
    }
}

pub fn parse_grading(s: &str) -> Result<Grading> {
    let s = s.trim();
    let bad = || Error::ModuleParse(format!("bad grading `{s}`"));
    let parse_int = |t: &str| t.trim().trim_start_matches('+').parse::<i64>().map_err(|_| bad());
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Grading::new(parse_int(n)?, d))
        }
        None => Ok(Grading::from_integer(parse_int(s)?)),
    }
}

/// `⊕ T+(s) ⊕ ⊕ Z(g)` in canonical form (both multisets sorted).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedUModule {
    towers: Vec<Grading>,
    finites: Vec<Grading>,
}

impl GradedUModule {
    pub fn new(mut towers: Vec<Grading>, mut finites: Vec<Grading>) -> Self {
        towers.sort();
        finites.sort();
        Self { towers, finites }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn tower(bottom: Grading) -> Self {
        Self::new(vec![bottom], vec![])
    }

    pub fn finite(at: Grading) -> Self {
        Self::new(vec![], vec![at])
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut towers = self.towers.clone();
        towers.extend_from_slice(&other.towers);
        let mut finites = self.finites.clone();
        finites.extend_from_slice(&other.finites);
        Self::new(towers, finites)
    }

    pub fn towers(&self) -> &[Grading] {
        &self.towers
    }

    pub fn finites(&self) -> &[Grading] {
        &self.finites
    }

    pub fn is_zero(&self) -> bool {
        self.towers.is_empty() && self.finites.is_empty()
    }

    pub fn summand_count(&self) -> usize {
        self.towers.len() + self.finites.len()
    }

    /// Tower bottoms and finite gradings, ascending, deduplicated.
    pub fn features(&self) -> Vec<Grading> {
        let set: BTreeSet<Grading> = self.towers.iter().chain(&self.finites).copied().collect();
        set.into_iter().collect()
    }

    fn tower_present(bottom: Grading, g: Grading) -> bool {
        bottom <= g && is_even_integer(g - bottom)
    }

    pub fn rank_at(&self, g: Grading) -> usize {
        self.towers.iter().filter(|&&s| Self::tower_present(s, g)).count()
            + self.finites.iter().filter(|&&f| f == g).count()
    }

    /// Rank of `U: M_g -> M_{g-2}`.
    pub fn u_rank_at(&self, g: Grading) -> usize {
        let below = g - 2;
        self.towers.iter().filter(|&&s| Self::tower_present(s, below)).count()
    }

    /// Basis of the slice at `g`: towers first (indices `0..towers`), then finites.
    pub fn basis_at(&self, g: Grading) -> Vec<usize> {
        let nt = self.towers.len();
        let towers = (0..nt).filter(|&i| Self::tower_present(self.towers[i], g));
        let finites = (0..self.finites.len()).filter(|&j| self.finites[j] == g).map(|j| nt + j);
        towers.chain(finites).collect()
    }

    fn u_matrix_at(&self, g: Grading) -> Vec<Vec<i64>> {
        let src = self.basis_at(g);
        let tgt = self.basis_at(g - 2);
        let nt = self.towers.len();
        tgt.iter().map(|&r| src.iter().map(|&c| i64::from(r == c && r < nt)).collect()).collect()
    }

    pub fn reverse_orientation(&self) -> Self {
        Self::new(self.towers.iter().map(|&s| -s).collect(), self.finites.iter().map(|&g| -g - 1).collect())
    }

    pub fn shift(&self, delta: Grading) -> Self {
        Self::new(self.towers.iter().map(|&s| s + delta).collect(), self.finites.iter().map(|&g| g + delta).collect())
    }

    pub fn d_invariant(&self) -> Result<Grading> {
        match self.towers.as_slice() {
            [d] => Ok(*d),
            [] => Err(Error::NoTower),
            many => Err(Error::TowerCount(many.len())),
        }
    }
}

impl fmt::Display for GradedUModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let rendered: Vec<String> = self
            .towers
            .iter()
            .map(|&s| format!("T+({})", format_grading(s)))
            .chain(self.finites.iter().map(|&g| format!("Z({})", format_grading(g))))
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

impl FromStr for GradedUModule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        if text == "0" {
            return Ok(Self::zero());
        }
        let mut towers = Vec::new();
        let mut finites = Vec::new();
        let mut rest = text;
        loop {
            rest = rest.trim_start();
            let (is_tower, after) = if let Some(r) = rest.strip_prefix("T+(") {
                (true, r)
            } else if let Some(r) = rest.strip_prefix("Z(") {
                (false, r)
            } else {
                return Err(Error::ModuleParse(format!("expected `T+(` or `Z(` at `{rest}`")));
            };
            let close = after.find(')').ok_or_else(|| Error::ModuleParse("missing `)`".into()))?;
            let g = parse_grading(&after[..close])?;
            if is_tower {
                towers.push(g);
            } else {
                finites.push(g);
            }
            rest = after[close + 1..].trim_start();
            if rest.is_empty() {
                break;
            }
            rest = rest.strip_prefix('+').ok_or_else(|| Error::ModuleParse(format!("expected `+` at `{rest}`")))?;
        }
        Ok(Self::new(towers, finites))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapKind {
    TowerProjection,
    TowerInclusion {
        tower: usize,
    },
    GeneratorSwap {
        tower: usize,
        finite: usize,
    },
    Identity,
    /// Identity on summands, target regraded by the map degree.
    Regrade,
    Zero,
    /// Factors in application order (first applied first).
    Composite(Vec<ModuleMap>),
}

/// A graded map `source_g -> target_{g + degree}` described symbolically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: GradedUModule,
    pub target: GradedUModule,
    pub degree: Grading,
    pub kind: MapKind,
}

impl ModuleMap {
    pub fn identity(m: &GradedUModule) -> Self {
        Self { source: m.clone(), target: m.clone(), degree: Grading::zero(), kind: MapKind::Identity }
    }

    pub fn zero(source: &GradedUModule, target: &GradedUModule) -> Self {
        Self { source: source.clone(), target: target.clone(), degree: Grading::zero(), kind: MapKind::Zero }
    }

    /// The U-equivariant isomorphism `M ≅ M[delta]`.
    pub fn regrade(m: &GradedUModule, delta: Grading) -> Self {
        Self { source: m.clone(), target: m.shift(delta), degree: delta, kind: MapKind::Regrade }
    }

    /// Kills every finite summand and every tower except the lowest one.
    pub fn tower_projection(m: &GradedUModule) -> Result<Self> {
        let lowest = *m.towers.first().ok_or(Error::NoTower)?;
        Ok(Self {
            source: m.clone(),
            target: GradedUModule::tower(lowest),
            degree: Grading::zero(),
            kind: MapKind::TowerProjection,
        })
    }

    /// Includes `T+(s)` as the `tower`-th tower of `target`.
    pub fn tower_inclusion(target: &GradedUModule, tower: usize) -> Result<Self> {
        let bottom = *target.towers.get(tower).ok_or(Error::NoTower)?;
        Ok(Self {
            source: GradedUModule::tower(bottom),
            target: target.clone(),
            degree: Grading::zero(),
            kind: MapKind::TowerInclusion { tower },
        })
    }

    /// Exchanges the bottom generator of a tower with the `finite_index`-th
    /// finite generator sitting at the same grading; identity elsewhere.
    pub fn generator_swap(m: &GradedUModule, finite_index: usize) -> Result<Self> {
        let g = *m.finites.get(finite_index).ok_or(Error::BadSummand(finite_index))?;
        let tower = m.towers.iter().position(|&s| s == g).ok_or(Error::NoMatchingFinite(g))?;
        Ok(Self {
            source: m.clone(),
            target: m.clone(),
            degree: Grading::zero(),
            kind: MapKind::GeneratorSwap { tower, finite: finite_index },
        })
    }

    /// `maps[0] ∘ maps[1] ∘ … ∘ maps[n-1]`.
    pub fn compose(maps: &[ModuleMap]) -> Result<Self> {
        let (outer, inner) = match maps {
            [] => return Err(Error::MapMismatch("empty composition".into())),
            [only] => return Ok(only.clone()),
            [outer, inner @ ..] => (outer, Self::compose(inner)?),
        };
        if inner.target != outer.source {
            return Err(Error::MapMismatch(format!("{} does not feed {}", inner.target, outer.source)));
        }
        let mut factors = match inner.kind.clone() {
            MapKind::Composite(f) => f,
            _ => vec![inner.clone()],
        };
        match &outer.kind {
            MapKind::Composite(f) => factors.extend(f.iter().cloned()),
            _ => factors.push(outer.clone()),
        }
        Ok(Self {
            source: inner.source.clone(),
            target: outer.target.clone(),
            degree: inner.degree + outer.degree,
            kind: MapKind::Composite(factors),
        })
    }

    /// Integer matrix of the slice map at source grading `g`
    /// (rows: target basis at `g + degree`, columns: source basis at `g`).
    pub fn matrix_at(&self, g: Grading) -> Vec<Vec<i64>> {
        let src = self.source.basis_at(g);
        let tgt = self.target.basis_at(g + self.degree);
        let nt_src = self.source.towers.len();
        let entry = |r: usize, c: usize| -> i64 {
            match &self.kind {
                MapKind::TowerProjection => i64::from(c == 0 && r == 0),
                MapKind::TowerInclusion { tower } => i64::from(c == 0 && r == *tower),
                MapKind::Identity | MapKind::Regrade => i64::from(r == c),
                MapKind::Zero => 0,
                MapKind::GeneratorSwap { tower, finite } => {
                    let f = nt_src + finite;
                    let bottom = g == self.source.towers[*tower];
                    match (r, c) {
                        (r, c) if bottom && r == *tower && c == f => 1,
                        (r, c) if bottom && r == f && c == *tower => 1,
                        (r, c) if bottom && (r == *tower || r == f || c == *tower || c == f) => 0,
                        (r, c) => i64::from(r == c),
                    }
                }
                MapKind::Composite(_) => unreachable!(),
            }
        };
        if let MapKind::Composite(factors) = &self.kind {
            let mut acc: Vec<Vec<i64>> =
                (0..src.len()).map(|r| (0..src.len()).map(|c| i64::from(r == c)).collect()).collect();
            let mut at = g;
            for f in factors {
                let rows = f.target.rank_at(at + f.degree);
                acc = linalg::mat_mul(&f.matrix_at(at), &acc, rows, src.len());
                at += f.degree;
            }
            return acc;
        }
        tgt.iter().map(|&r| src.iter().map(|&c| entry(r, c)).collect()).collect()
    }

    pub fn rank_at(&self, g: Grading) -> usize {
        linalg::rank(&self.matrix_at(g))
    }

    pub fn kernel_rank_at(&self, g: Grading) -> usize {
        self.source.rank_at(g) - self.rank_at(g)
    }

    /// Source gradings at which the map can differ from its periodic tail.
    pub fn check_gradings(&self) -> Vec<Grading> {
        let mut set = BTreeSet::new();
        for f in self.source.features().into_iter().chain(self.target.features().into_iter().map(|t| t - self.degree)) {
            for k in 0..3 {
                set.insert(f + 2 * k);
            }
        }
        set.into_iter().collect()
    }

    /// Rank-level U-equivariance: `rank(φ ∘ U) = rank(U ∘ φ)` at every slice.
    pub fn is_u_equivariant(&self) -> bool {
        self.check_gradings().into_iter().all(|g| {
            let phi_lo = self.matrix_at(g - 2);
            let u_src = self.source.u_matrix_at(g);
            let out_rows = self.target.rank_at(g - 2 + self.degree);
            let cols = self.source.rank_at(g);
            let left = linalg::mat_mul(&phi_lo, &u_src, out_rows, cols);
            let u_tgt = self.target.u_matrix_at(g + self.degree);
            let right = linalg::mat_mul(&u_tgt, &self.matrix_at(g), out_rows, cols);
            linalg::rank(&left) == linalg::rank(&right)
        })
    }

    /// Same endpoints and degree, and equal slice matrices everywhere.
    pub fn equals(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.degree == other.degree
            && self.check_gradings().into_iter().all(|g| self.matrix_at(g) == other.matrix_at(g))
    }

    /// Compare the two maps on a single slice.
    pub fn agrees_at(&self, other: &Self, g: Grading) -> bool {
        self.matrix_at(g) == other.matrix_at(g)
    }
}

impl fmt::Display for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match &self.kind {
            MapKind::TowerProjection => "tower_projection",
            MapKind::TowerInclusion { .. } => "tower_inclusion",
            MapKind::GeneratorSwap { .. } => "generator_swap",
            MapKind::Identity => "identity",
            MapKind::Regrade => "regrade",
            MapKind::Zero => "zero",
            MapKind::Composite(_) => "composite",
        };
        write!(f, "{name}: {} -> {}", self.source, self.target)?;
        if !self.degree.is_zero() {
            let sign = if self.degree.is_negative() { "" } else { "+" };
            write!(f, " (degree {sign}{})", format_grading(self.degree))?;
        }
        Ok(())
    }
}
