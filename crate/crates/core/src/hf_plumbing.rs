//! Full paths, the spanning set, U-relation classes and the assembly of
//! `H+(G) ≅ HF+(-Y(G))`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;

use crate::char_lattice::{CharVector, LatticeContext};
use crate::error::{Error, Result};
use crate::graded_module::{GradedUModule, Grading};

pub const DEFAULT_SEARCH_CAP: usize = 1_000_000;
pub const DEFAULT_HULL_MARGIN: u32 = 4;

#[derive(Debug, Clone)]
pub struct HfConfig {
    pub search_cap: usize,
    pub hull_margin: u32,
    /// Defaults to `16 + |G|` when unset.
    pub level_cap: Option<u32>,
    pub threads: usize,
}

impl Default for HfConfig {
    fn default() -> Self {
        Self { search_cap: DEFAULT_SEARCH_CAP, hull_margin: DEFAULT_HULL_MARGIN, level_cap: None, threads: 1 }
    }
}

/// `U^level ⊗ K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UElement {
    pub vector: CharVector,
    pub level: u32,
}

impl UElement {
    pub fn new(vector: impl Into<CharVector>, level: u32) -> Self {
        Self { vector: vector.into(), level }
    }
}

impl fmt::Display for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            0 => write!(f, "{}", self.vector),
            l => write!(f, "U^{l}⊗{}", self.vector),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCertificate {
    pub start: CharVector,
    /// 0-based vertex indices.
    pub steps: Vec<usize>,
    pub terminal: CharVector,
}

impl PathCertificate {
    /// Steps as 1-based vertex numbers, the way paths are usually written.
    pub fn steps_one_based(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s + 1).collect()
    }

    /// Every step is U-free, the replay lands on `terminal`, and `-terminal`
    /// lies in the basic box.
    pub fn is_valid(&self, ctx: &LatticeContext) -> bool {
        matches!(replay(ctx, &self.start.0, &self.steps), Ok(Some(end)) if end == self.terminal)
            && is_good_terminal(ctx, &self.terminal.0)
            && u_free_moves(ctx, &self.terminal.0).is_empty()
    }
}

/// Vertices where `ξ_v = -m(v)`, i.e. where the relation exponent vanishes.
pub fn u_free_moves(ctx: &LatticeContext, xi: &[i64]) -> Vec<usize> {
    xi.iter().zip(ctx.weights()).enumerate().filter(|(_, (x, m))| **x == -**m).map(|(i, _)| i).collect()
}

/// `m(v) <= L_v <= -m(v) - 2` everywhere, i.e. `-L` is in the basic box.
pub fn is_good_terminal(ctx: &LatticeContext, xi: &[i64]) -> bool {
    xi.iter().zip(ctx.weights()).all(|(&x, &m)| m <= x && x <= -m - 2)
}

/// Apply `steps` from `start`, returning `None` if a step is not U-free.
pub fn replay(ctx: &LatticeContext, start: &[i64], steps: &[usize]) -> Result<Option<CharVector>> {
    ctx.check_len(start)?;
    let mut cur = start.to_vec();
    for &i in steps {
        if i >= ctx.len() {
            return Err(Error::BadIndex(i));
        }
        if cur[i] != -ctx.weights()[i] {
            return Ok(None);
        }
        ctx.apply_move(&mut cur, i, 1);
    }
    Ok(Some(CharVector(cur)))
}

/// Exhaustive search over U-free move sequences from `xi`, with memoization
/// on visited vectors. `order` fixes the vertex exploration order.
pub fn find_full_path_ordered(
    ctx: &LatticeContext,
    xi: &[i64],
    cap: usize,
    order: Option<&[usize]>,
) -> Result<Option<PathCertificate>> {
    if !ctx.is_characteristic(xi)? {
        return Err(Error::NotCharacteristic);
    }
    let start = xi.to_vec();
    let mut parent: HashMap<Vec<i64>, (Vec<i64>, usize)> = HashMap::new();
    let mut visited: HashSet<Vec<i64>> = HashSet::new();
    visited.insert(start.clone());
    let mut stack = vec![start.clone()];
    while let Some(cur) = stack.pop() {
        let mut moves = u_free_moves(ctx, &cur);
        if moves.is_empty() {
            if is_good_terminal(ctx, &cur) {
                let mut steps = Vec::new();
                let mut at = cur.clone();
                while let Some((prev, step)) = parent.get(&at) {
                    steps.push(*step);
                    at = prev.clone();
                }
                steps.reverse();
                return Ok(Some(PathCertificate { start: CharVector(start), steps, terminal: CharVector(cur) }));
            }
            continue;
        }
        if let Some(order) = order {
            moves.sort_by_key(|m| order.iter().position(|o| o == m).unwrap_or(usize::MAX));
        }
        for &i in moves.iter().rev() {
            let mut next = cur.clone();
            ctx.apply_move(&mut next, i, 1);
            if visited.insert(next.clone()) {
                if visited.len() > cap {
                    return Err(Error::SearchCapExceeded(cap));
                }
                parent.insert(next.clone(), (cur.clone(), i));
                stack.push(next);
            }
        }
    }
    Ok(None)
}

pub fn find_full_path(ctx: &LatticeContext, xi: &[i64], cap: usize) -> Result<Option<PathCertificate>> {
    find_full_path_ordered(ctx, xi, cap, None)
}

fn require_applicable(ctx: &LatticeContext) -> Result<()> {
    let report = ctx.graph().validate();
    if report.algorithm_applicable {
        return Ok(());
    }
    let reason = if !report.is_tree {
        "graph is not a tree".to_string()
    } else if !report.is_negative_definite {
        "intersection form is not negative definite".to_string()
    } else if report.bad_vertices.len() > 1 {
        format!("{} bad vertices", report.bad_vertices.len())
    } else {
        format!("|det| = {} is not 1", report.determinant)
    };
    Err(Error::NotApplicable(reason))
}

/// Box vectors admitting a full path, lexicographically ordered.
pub fn spanning_set(ctx: &LatticeContext, cfg: &HfConfig) -> Result<Vec<(CharVector, PathCertificate)>> {
    require_applicable(ctx)?;
    let candidates = ctx.basic_box()?;
    let search = |k: &CharVector| find_full_path(ctx, &k.0, cfg.search_cap).map(|p| p.map(|p| (k.clone(), p)));
    let found: Vec<Result<Option<(CharVector, PathCertificate)>>> = if cfg.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build().expect("thread pool");
        pool.install(|| candidates.par_iter().map(search).collect())
    } else {
        candidates.iter().map(search).collect()
    };
    let mut out = Vec::new();
    for r in found {
        if let Some(pair) = r? {
            out.push(pair);
        }
    }
    Ok(out)
}

/// Elements identified with `e` by one adjunction relation
/// `U^{max(0,-n)} ⊗ K ~ U^{max(0,n)} ⊗ (K + 2PD[v])`, `2n = ξ_v + m(v)`,
/// read in both directions.
pub fn relation_neighbors(ctx: &LatticeContext, e: &UElement) -> Vec<UElement> {
    let xi = &e.vector.0;
    let level = i64::from(e.level);
    let mut out = Vec::new();
    for v in 0..ctx.len() {
        let m = ctx.weights()[v];
        let n = (xi[v] + m) / 2;
        if level + n >= 0 {
            let mut next = xi.clone();
            ctx.apply_move(&mut next, v, 1);
            out.push(UElement::new(next, (level + n) as u32));
        }
        let n_back = (xi[v] - m) / 2;
        if level - n_back >= 0 {
            let mut prev = xi.clone();
            ctx.apply_move(&mut prev, v, -1);
            out.push(UElement::new(prev, (level - n_back) as u32));
        }
    }
    out
}

/// Union-find closure of a seed set under the adjunction relations.
#[derive(Debug, Clone)]
pub struct ClassTable {
    elements: Vec<UElement>,
    index: HashMap<UElement, usize>,
    class_of: Vec<usize>,
    seeds: Vec<usize>,
    class_grading: BTreeMap<usize, Grading>,
}

impl ClassTable {
    pub fn elements(&self) -> &[UElement] {
        &self.elements
    }

    pub fn class_of(&self, e: &UElement) -> Option<usize> {
        self.index.get(e).map(|&i| self.class_of[i])
    }

    pub fn same_class(&self, a: &UElement, b: &UElement) -> bool {
        matches!((self.class_of(a), self.class_of(b)), (Some(x), Some(y)) if x == y)
    }

    pub fn class_count(&self) -> usize {
        self.class_of.iter().collect::<BTreeSet<_>>().len()
    }

    /// Number of distinct classes containing at least one seed.
    pub fn seed_class_count(&self) -> usize {
        self.seeds.iter().map(|&s| self.class_of[s]).collect::<BTreeSet<_>>().len()
    }

    /// Distinct seed classes counted per grading.
    pub fn seed_classes_by_grading(&self) -> BTreeMap<Grading, usize> {
        let classes: BTreeSet<usize> = self.seeds.iter().map(|&s| self.class_of[s]).collect();
        let mut out = BTreeMap::new();
        for c in classes {
            *out.entry(self.class_grading[&c]).or_insert(0) += 1;
        }
        out
    }
}

pub fn class_closure(ctx: &LatticeContext, seeds: &[UElement], hull_margin: u32) -> Result<ClassTable> {
    for s in seeds {
        if !ctx.is_characteristic(&s.vector.0)? {
            return Err(Error::NotCharacteristic);
        }
    }
    let margin = 2 * i64::from(hull_margin);
    let max_level = seeds.iter().map(|s| s.level).max().unwrap_or(0) + hull_margin;
    let in_hull = |e: &UElement| {
        e.level <= max_level && e.vector.0.iter().zip(ctx.weights()).all(|(&x, &m)| m - margin <= x && x <= -m + margin)
    };

    let mut elements: Vec<UElement> = Vec::new();
    let mut index: HashMap<UElement, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut seed_ids = Vec::new();
    for s in seeds {
        if !in_hull(s) {
            return Err(Error::HullExhausted(hull_margin));
        }
        let id = *index.entry(s.clone()).or_insert_with(|| {
            elements.push(s.clone());
            queue.push_back(elements.len() - 1);
            elements.len() - 1
        });
        seed_ids.push(id);
    }
    while let Some(id) = queue.pop_front() {
        for nb in relation_neighbors(ctx, &elements[id].clone()) {
            if !in_hull(&nb) {
                return Err(Error::HullExhausted(hull_margin));
            }
            let nid = match index.get(&nb) {
                Some(&n) => n,
                None => {
                    elements.push(nb.clone());
                    index.insert(nb, elements.len() - 1);
                    queue.push_back(elements.len() - 1);
                    elements.len() - 1
                }
            };
            edges.push((id, nid));
        }
    }
    let mut uf = UnionFind::new(elements.len());
    for (a, b) in edges {
        uf.union(a, b);
    }
    let class_of: Vec<usize> = (0..elements.len()).map(|i| uf.find(i)).collect();
    let mut class_grading = BTreeMap::new();
    for (i, e) in elements.iter().enumerate() {
        if let std::collections::btree_map::Entry::Vacant(slot) = class_grading.entry(class_of[i]) {
            slot.insert(ctx.hf_grading(&e.vector.0, e.level)?);
        }
    }
    Ok(ClassTable { elements, index, class_of, seeds: seed_ids, class_grading })
}

/// `H+(G)` together with the rank profile it was assembled from.
#[derive(Debug, Clone)]
pub struct HPlus {
    pub module: GradedUModule,
    pub ranks: Vec<(Grading, usize)>,
    pub warnings: Vec<String>,
}

fn closure_with_retries(ctx: &LatticeContext, seeds: &[UElement], margin: u32) -> Result<ClassTable> {
    let mut m = margin;
    loop {
        match class_closure(ctx, seeds, m) {
            Err(Error::HullExhausted(_)) if m < margin.saturating_mul(8) => m *= 2,
            other => return other,
        }
    }
}

pub fn compute_hplus_detailed(ctx: &LatticeContext, cfg: &HfConfig) -> Result<HPlus> {
    let spanning = spanning_set(ctx, cfg)?;
    if spanning.is_empty() {
        return Ok(HPlus { module: GradedUModule::zero(), ranks: vec![], warnings: vec!["empty spanning set".into()] });
    }
    let offsets: Vec<(CharVector, Grading)> =
        spanning.iter().map(|(k, _)| ctx.level_zero_offset(&k.0).map(|c| (k.clone(), c))).collect::<Result<_>>()?;
    let first = offsets.iter().map(|(_, c)| -*c).min().expect("non-empty");
    let entered = offsets.iter().map(|(_, c)| -*c).max().expect("non-empty");
    let level_cap = cfg.level_cap.unwrap_or(16 + ctx.len() as u32);
    let max_steps = ((entered - first) / 2).to_integer() as u32 + level_cap;

    let two = Grading::from_integer(2);
    let mut ranks: Vec<(Grading, usize)> = Vec::new();
    let mut g = first;
    let mut steps = 0;
    loop {
        let seeds: Vec<UElement> = offsets
            .iter()
            .filter_map(|(k, c)| {
                let level = (g + *c) / 2;
                (level.is_integer() && level.to_integer() >= 0)
                    .then(|| UElement::new(k.clone(), level.to_integer() as u32))
            })
            .collect();
        let count =
            if seeds.is_empty() { 0 } else { closure_with_retries(ctx, &seeds, cfg.hull_margin)?.seed_class_count() };
        ranks.push((g, count));
        let stable = g >= entered && ranks.len() >= 2 && ranks[ranks.len() - 1].1 == 1 && ranks[ranks.len() - 2].1 == 1;
        if stable {
            break;
        }
        steps += 1;
        if steps > max_steps {
            return Err(Error::LevelCapExceeded(level_cap));
        }
        g += two;
    }

    let mut warnings = Vec::new();
    let tail: Vec<&(Grading, usize)> = ranks.iter().filter(|(g, _)| *g >= entered).collect();
    if tail.windows(2).any(|w| w[1].1 > w[0].1) {
        warnings.push("class counts increase with U-level".to_string());
    }

    // the tower starts at the least grading from which every rank is >= 1
    let bottom_index = ranks.iter().rposition(|(_, r)| *r == 0).map_or(0, |i| i + 1);
    let bottom = ranks[bottom_index].0;
    let mut finites = Vec::new();
    for (i, &(g, r)) in ranks.iter().enumerate() {
        let excess = r - usize::from(i >= bottom_index);
        finites.extend(std::iter::repeat_n(g, excess));
    }
    Ok(HPlus { module: GradedUModule::new(vec![bottom], finites), ranks, warnings })
}

/// `H+(G)`, which computes `HF+(-Y(G))`.
pub fn compute_hplus(ctx: &LatticeContext, cfg: &HfConfig) -> Result<GradedUModule> {
    compute_hplus_detailed(ctx, cfg).map(|h| h.module)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `Y(G)`, the boundary of the plumbing.
    Boundary,
    /// `-Y(G)`.
    Reversed,
}

pub fn compute_hfplus(ctx: &LatticeContext, orientation: Orientation, cfg: &HfConfig) -> Result<GradedUModule> {
    let hplus = compute_hplus(ctx, cfg)?;
    Ok(match orientation {
        Orientation::Reversed => hplus,
        Orientation::Boundary => hplus.reverse_orientation(),
    })
}
