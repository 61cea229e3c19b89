//! Characters of finite abelian groups and the pair of mutually unbiased
//! bases they give: the standard basis on elements and the normalized
//! character basis.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, MorId};

pub const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct CharacterTable {
    pub order: usize,
    /// Exponent of the group; every character value is an `exponent`-th root of unity.
    pub exponent: usize,
    /// `phases[k][g] = a` means `χ_k(g) = exp(2πi a / exponent)`.
    pub phases: Vec<Vec<usize>>,
    #[serde(skip)]
    pub table: Vec<Vec<Complex64>>,
    pub tolerance: f64,
}

fn root(a: usize, e: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * a as f64 / e as f64)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

/// Every homomorphism `G -> Z/exponent`, ordered lexicographically by the
/// values on a greedily chosen generating set.
pub fn character_table(g: &Groupoid) -> Result<CharacterTable> {
    if !g.is_group() {
        return Err(Error::NotAGroup(format!("{} objects", g.n_objects())));
    }
    if !g.is_abelian() {
        return Err(Error::NonAbelian);
    }
    let n = g.n_morphisms();
    let e = (0..n).map(|x| g.order(x)).fold(1, lcm);
    // generators, largest order first, each outside the subgroup generated so far
    let mut by_order: Vec<MorId> = (0..n).collect();
    by_order.sort_by_key(|&x| (std::cmp::Reverse(g.order(x)), x));
    let mut generated = vec![false; n];
    generated[g.identity(0)] = true;
    let mut gens = Vec::new();
    for &x in &by_order {
        if generated[x] {
            continue;
        }
        gens.push(x);
        let mut members: Vec<MorId> = (0..n).filter(|&y| generated[y]).collect();
        let mut i = 0;
        while i < members.len() {
            for &z in &gens {
                let w = g.compose(members[i], z).expect("group");
                if !generated[w] {
                    generated[w] = true;
                    members.push(w);
                }
            }
            i += 1;
        }
    }
    // candidate assignments: generator of order d may take any multiple of e/d
    let mut phases = Vec::new();
    let radices: Vec<usize> = gens.iter().map(|&x| g.order(x)).collect();
    let total: usize = radices.iter().product();
    for mut index in 0..total {
        let mut values = Vec::with_capacity(gens.len());
        for &d in &radices {
            values.push((index % d) * (e / d));
            index /= d;
        }
        if let Some(row) = extend(g, &gens, &values, e) {
            phases.push((values, row));
        }
    }
    phases.sort();
    let phases: Vec<Vec<usize>> = phases.into_iter().map(|(_, row)| row).collect();
    debug_assert_eq!(phases.len(), n);
    let table = phases.iter().map(|row| row.iter().map(|&a| root(a, e)).collect()).collect();
    Ok(CharacterTable { order: n, exponent: e, phases, table, tolerance: TOLERANCE })
}

// extends generator values to a homomorphism, or None if inconsistent
fn extend(g: &Groupoid, gens: &[MorId], values: &[usize], e: usize) -> Option<Vec<usize>> {
    let n = g.n_morphisms();
    let mut row = vec![usize::MAX; n];
    row[g.identity(0)] = 0;
    let mut queue = vec![g.identity(0)];
    while let Some(x) = queue.pop() {
        for (&z, &v) in gens.iter().zip(values) {
            let w = g.compose(x, z).expect("group");
            let a = (row[x] + v) % e;
            if row[w] == usize::MAX {
                row[w] = a;
                queue.push(w);
            } else if row[w] != a {
                return None;
            }
        }
    }
    Some(row)
}

impl CharacterTable {
    /// Largest deviation of `Σ_g χ_j(g) conj χ_k(g) / n` from `δ_jk`.
    pub fn orthonormality_deviation(&self) -> f64 {
        let n = self.order as f64;
        let mut worst: f64 = 0.0;
        for (j, a) in self.table.iter().enumerate() {
            for (k, b) in self.table.iter().enumerate() {
                let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex64>() / n;
                let want = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((ip - Complex64::new(want, 0.0)).norm());
            }
        }
        worst
    }

    /// `χ_k(g)`.
    pub fn value(&self, k: usize, g: MorId) -> Complex64 {
        self.table[k][g]
    }

    pub fn dump(&self, g: &Groupoid) -> String {
        let mut out = format!("characters {}x{}\ncols", self.order, self.order);
        for x in 0..self.order {
            out.push('\t');
            out.push_str(g.name(x));
        }
        out.push('\n');
        for (k, row) in self.table.iter().enumerate() {
            out.push_str(&format!("chi{k}"));
            for z in row {
                out.push_str(&format!("\t({:.12},{:.12})", z.re + 0.0, z.im + 0.0));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MubReport {
    pub n: usize,
    /// Largest `| |⟨b_g, c_k⟩|² - 1/n |`, together with the deviation of the
    /// character basis from orthonormality.
    pub max_deviation: f64,
    pub pass: bool,
}

/// The standard basis and the normalized character basis are mutually unbiased.
pub fn check_mub(table: &CharacterTable) -> MubReport {
    let n = table.order;
    let inv = 1.0 / n as f64;
    let mut worst = table.orthonormality_deviation();
    for row in &table.table {
        for z in row {
            // ⟨b_g, c_k⟩ = χ_k(g) / √n
            worst = worst.max((z.norm_sqr() * inv - inv).abs());
        }
    }
    MubReport { n, max_deviation: worst, pass: worst <= TOLERANCE }
}
