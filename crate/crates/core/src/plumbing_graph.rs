//! Weighted plumbing trees, their intersection forms, and the validity gate
//! for the lattice algorithm.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub label: String,
    pub weight: i64,
}

/// A weighted graph whose vertex order fixes matrix coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlumbingGraph {
    vertices: Vec<Vertex>,
    /// Index pairs with `a < b`.
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    pub matrix: Vec<Vec<i64>>,
    pub det: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub is_tree: bool,
    pub is_negative_definite: bool,
    pub determinant: BigInt,
    pub bad_vertices: Vec<String>,
    pub algorithm_applicable: bool,
}

fn valid_label(label: &str) -> bool {
    !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PlumbingGraph {
    pub fn new<L: AsRef<str>>(vertices: &[(L, i64)], edges: &[(L, L)]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut index = HashMap::new();
        let mut verts = Vec::with_capacity(vertices.len());
        for (label, weight) in vertices {
            let label = label.as_ref();
            if !valid_label(label) {
                return Err(Error::InvalidLabel(label.to_string()));
            }
            if index.insert(label.to_string(), verts.len()).is_some() {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
            verts.push(Vertex { label: label.to_string(), weight: *weight });
        }
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let ia = *index.get(a).ok_or_else(|| Error::DanglingEdge(a.to_string()))?;
            let ib = *index.get(b).ok_or_else(|| Error::DanglingEdge(b.to_string()))?;
            if ia == ib {
                return Err(Error::SelfLoop(a.to_string()));
            }
            if !edge_set.insert((ia.min(ib), ia.max(ib))) {
                return Err(Error::DuplicateEdge(a.to_string(), b.to_string()));
            }
        }
        Ok(Self { vertices: verts, edges: edge_set })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn weights(&self) -> Vec<i64> {
        self.vertices.iter().map(|v| v.weight).collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.vertices[i].label
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == i || b == i).count()
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == i {
                    Some(b)
                } else if b == i {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn intersection_form(&self) -> IntersectionForm {
        let n = self.len();
        let mut matrix = vec![vec![0i64; n]; n];
        for (i, v) in self.vertices.iter().enumerate() {
            matrix[i][i] = v.weight;
        }
        for &(a, b) in &self.edges {
            matrix[a][b] = 1;
            matrix[b][a] = 1;
        }
        let det = linalg::det(&matrix);
        IntersectionForm { matrix, det }
    }

    fn is_connected(&self) -> bool {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn validate(&self) -> ValidationReport {
        let form = self.intersection_form();
        // Connected forests are trees; disconnected ones are rejected.
        let is_tree = self.edges.len() + 1 == self.len() && self.is_connected();
        let is_negative_definite = form.is_negative_definite();
        let bad_vertices: Vec<String> = (0..self.len())
            .filter(|&i| self.vertices[i].weight > -(self.degree(i) as i64))
            .map(|i| self.vertices[i].label.clone())
            .collect();
        let algorithm_applicable =
            is_tree && is_negative_definite && form.det.abs() == BigInt::from(1) && bad_vertices.len() <= 1;
        ValidationReport { is_tree, is_negative_definite, determinant: form.det, bad_vertices, algorithm_applicable }
    }

    /// Star-shaped negative-definite plumbing bounded by the Brieskorn sphere
    /// `Σ(p, q, r)`. The central vertex is `v1`; arms follow in argument order.
    pub fn brieskorn(p: i64, q: i64, r: i64) -> Result<Self> {
        let coprime = p.gcd(&q) == 1 && p.gcd(&r) == 1 && q.gcd(&r) == 1;
        if p < 2 || q < 2 || r < 2 || !coprime {
            return Err(Error::NotCoprime(p, q, r));
        }
        let n = p.checked_mul(q).and_then(|x| x.checked_mul(r)).ok_or(Error::Overflow)?;
        let mut central_numer = -1i64;
        let mut arms = Vec::new();
        for a in [p, q, r] {
            let cofactor = n / a;
            // b * cofactor ≡ -1 (mod a), 0 < b < a
            let inv = mod_inverse(cofactor.rem_euclid(a), a).expect("coprime cofactor");
            let b = (-inv).rem_euclid(a);
            central_numer -= b * cofactor;
            arms.push(negative_continued_fraction(a, b));
        }
        debug_assert_eq!(central_numer % n, 0);
        let e0 = central_numer / n;

        let mut vertices = vec![("v1".to_string(), e0)];
        let mut edges = Vec::new();
        for arm in arms {
            let mut prev = "v1".to_string();
            for w in arm {
                let label = format!("v{}", vertices.len() + 1);
                vertices.push((label.clone(), w));
                edges.push((prev, label.clone()));
                prev = label;
            }
        }
        let graph = Self::new(&vertices, &edges)?;
        assert_eq!(graph.intersection_form().det.abs(), BigInt::from(1), "Brieskorn plumbing must be unimodular");
        Ok(graph)
    }
}

impl IntersectionForm {
    pub fn size(&self) -> usize {
        self.matrix.len()
    }

    /// `(-1)^k det(Q_k) > 0` for every leading principal minor.
    pub fn is_negative_definite(&self) -> bool {
        linalg::leading_minors(&self.matrix).iter().enumerate().all(|(k, m)| {
            let signed = if (k + 1) % 2 == 0 { m.clone() } else { -m.clone() };
            !signed.is_zero() && signed.is_positive()
        })
    }
}

fn mod_inverse(x: i64, m: i64) -> Option<i64> {
    let e = x.extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// Coefficients `c_i >= 2` with `a/b = c_1 - 1/(c_2 - 1/...)`, negated.
fn negative_continued_fraction(mut a: i64, mut b: i64) -> Vec<i64> {
    let mut out = Vec::new();
    while b > 0 {
        let c = Integer::div_ceil(&a, &b);
        out.push(-c);
        let next = c * b - a;
        a = b;
        b = next;
    }
    out
}
