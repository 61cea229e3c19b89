//! Linearization of cells: a span becomes the matrix of a linear map between
//! the free vector spaces on the elements of its two 1-cells.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::path::OneCell;
use crate::profunctor::ElemId;
use crate::span::Span2;

/// Integer matrix with rows indexed by the target basis and columns by the
/// source basis, so that composites multiply as `Q(τ) · Q(σ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NatMatrix {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<u64>>,
}

impl NatMatrix {
    pub fn identity(labels: Vec<String>) -> NatMatrix {
        let n = labels.len();
        let entries = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
        NatMatrix { rows: labels.clone(), cols: labels, entries }
    }

    pub fn transpose(&self) -> NatMatrix {
        let entries = (0..self.cols.len())
            .map(|j| (0..self.rows.len()).map(|i| self.entries[i][j]).collect())
            .collect();
        NatMatrix { rows: self.cols.clone(), cols: self.rows.clone(), entries }
    }

    /// `self · other`; `None` when the inner dimensions differ.
    pub fn mul(&self, other: &NatMatrix) -> Option<NatMatrix> {
        if self.cols.len() != other.rows.len() {
            return None;
        }
        let entries = (0..self.rows.len())
            .map(|i| {
                (0..other.cols.len())
                    .map(|j| (0..self.cols.len()).map(|k| self.entries[i][k] * other.entries[k][j]).sum())
                    .collect()
            })
            .collect();
        Some(NatMatrix { rows: self.rows.clone(), cols: other.cols.clone(), entries })
    }

    /// Column `j` as a vector over the rows.
    pub fn column(&self, j: usize) -> Vec<u64> {
        self.entries.iter().map(|r| r[j]).collect()
    }

    /// Text dump: a header line of column labels, then one line per row.
    pub fn dump(&self) -> String {
        let mut out = format!("matrix {}x{}\ncols\t{}\n", self.rows.len(), self.cols.len(), self.cols.join("\t"));
        for (label, row) in self.rows.iter().zip(&self.entries) {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "{label}\t{}", cells.join("\t"));
        }
        out
    }
}

/// `Q(σ)`: the entry at (t, s) is `σ(s, t)`. Block diagonal by stage, since
/// spans only pair elements of equal stage.
pub fn q_span(sigma: &Span2) -> NatMatrix {
    let (src, tgt) = (sigma.src(), sigma.tgt());
    let mut entries = vec![vec![0; src.len()]; tgt.len()];
    for (&(s, t), &v) in sigma.entries() {
        entries[t][s] = v;
    }
    NatMatrix { rows: tgt.labels(), cols: src.labels(), entries }
}

/// First place where two values that should agree do not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QWitness {
    pub description: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct QCheck {
    pub name: String,
    pub pass: bool,
    pub witness: Option<QWitness>,
}

impl QCheck {
    fn new(name: &str, witness: Option<String>) -> QCheck {
        QCheck { name: name.into(), pass: witness.is_none(), witness: witness.map(|description| QWitness { description }) }
    }
}

/// `Q(σ ; τ) = Q(τ) · Q(σ)` over the integers.
pub fn check_q_vertical(sigma: &Span2, tau: &Span2) -> Result<QCheck> {
    let composite = q_span(&sigma.then(tau)?);
    let product = q_span(tau).mul(&q_span(sigma)).expect("composable cells have matching dimensions");
    let witness = first_difference(&composite, &product)
        .map(|(i, j, a, b)| format!("entry ({}, {}): Q of composite {a}, product {b}", composite.rows[i], composite.cols[j]));
    Ok(QCheck::new("Q preserves vertical composition", witness))
}

fn first_difference(a: &NatMatrix, b: &NatMatrix) -> Option<(usize, usize, u64, u64)> {
    for (i, (ra, rb)) in a.entries.iter().zip(&b.entries).enumerate() {
        for (j, (&x, &y)) in ra.iter().zip(rb).enumerate() {
            if x != y {
                return Some((i, j, x, y));
            }
        }
    }
    None
}

/// The matrix is an intertwiner: for every basis element `s` and every single
/// morphism acting on the left or right, `M(h·s) = h·M(s)` and `M(s·g) = M(s)·g`.
pub fn check_q_naturality(src: &OneCell, tgt: &OneCell, m: &NatMatrix) -> QCheck {
    let (g, h) = (src.source(), src.target());
    let push = |col: Vec<u64>, f: &dyn Fn(ElemId) -> ElemId| {
        let mut out = vec![0; col.len()];
        for (t, v) in col.into_iter().enumerate() {
            if v != 0 {
                out[f(t)] += v;
            }
        }
        out
    };
    for s in 0..src.len() {
        let (a, b) = src.stage(s);
        for k in h.into_object(a) {
            let lhs = m.column(src.act_left(k, s));
            let rhs = push(m.column(s), &|t| tgt.act_left(k, t));
            if lhs != rhs {
                let w = format!("left action of {} on column {}", h.name(k), src.label(s));
                return QCheck::new("Q(σ) intertwines the actions", Some(w));
            }
        }
        for k in g.from_object(b) {
            let lhs = m.column(src.act_right(s, k));
            let rhs = push(m.column(s), &|t| tgt.act_right(t, k));
            if lhs != rhs {
                let w = format!("right action of {} on column {}", g.name(k), src.label(s));
                return QCheck::new("Q(σ) intertwines the actions", Some(w));
            }
        }
    }
    QCheck::new("Q(σ) intertwines the actions", None)
}

/// Orbits of same-stage pairs `(s, t)` under morphisms acting on both legs.
pub fn pair_orbits(src: &OneCell, tgt: &OneCell) -> Vec<Vec<(ElemId, ElemId)>> {
    let (g, h) = (src.source(), src.target());
    let mut by_stage: HashMap<_, Vec<ElemId>> = HashMap::new();
    for t in 0..tgt.len() {
        by_stage.entry(tgt.stage(t)).or_default().push(t);
    }
    let mut seen = std::collections::HashSet::new();
    let mut orbits = Vec::new();
    for s in 0..src.len() {
        for &t in by_stage.get(&src.stage(s)).map(Vec::as_slice).unwrap_or(&[]) {
            if !seen.insert((s, t)) {
                continue;
            }
            let mut orbit = vec![(s, t)];
            let mut i = 0;
            while i < orbit.len() {
                let (x, y) = orbit[i];
                let (a, b) = src.stage(x);
                let moves: Vec<(ElemId, ElemId)> = h
                    .into_object(a)
                    .map(|k| (src.act_left(k, x), tgt.act_left(k, y)))
                    .chain(g.from_object(b).map(|k| (src.act_right(x, k), tgt.act_right(y, k))))
                    .collect();
                for p in moves {
                    if seen.insert(p) {
                        orbit.push(p);
                    }
                }
                i += 1;
            }
            orbits.push(orbit);
        }
    }
    orbits
}

/// A natural span with entries drawn uniformly from `0..=max` per orbit,
/// each orbit left empty with probability `1 - density`.
pub fn random_natural_span<R: Rng>(
    src: &Arc<OneCell>,
    tgt: &Arc<OneCell>,
    rng: &mut R,
    density: f64,
    max: u64,
) -> Result<Span2> {
    let mut entries = Vec::new();
    for orbit in pair_orbits(src, tgt) {
        if !rng.gen_bool(density) {
            continue;
        }
        let v = rng.gen_range(1..=max);
        entries.extend(orbit.into_iter().map(|p| (p, v)));
    }
    Span2::new(src.clone(), tgt.clone(), entries)
}
