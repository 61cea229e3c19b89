//! Named groups accepted as shorthands on the command line and in files.

use crate::error::{Error, Result};
use crate::groupoid::Groupoid;

/// The fixed catalog exercised by the acceptance battery.
pub const NAMES: [&str; 12] = [
    "Z/1", "Z/2", "Z/3", "Z/4", "Z/5", "Z/6", "Z/7", "Z/8", "Z/2×Z/2", "S3", "D4", "Q8",
];

pub const MAX_CYCLIC: usize = 16;

/// Resolves a shorthand such as `Z/5`, `Z5`, `Z_5`, `Z/2×Z/2`, `V4`, `S3`, `D4` or `Q8`.
pub fn group(name: &str) -> Result<Groupoid> {
    Ok(match canonical_name(name)?.as_str() {
        "Z/2×Z/2" => klein(),
        "S3" => symmetric3(),
        "D4" => dihedral4(),
        "Q8" => quaternion(),
        cyc => cyclic(cyc[2..].parse().expect("canonical cyclic name")),
    })
}

/// Canonical spelling of a shorthand, used in reports.
pub fn canonical_name(name: &str) -> Result<String> {
    let key: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let unknown = || Error::UnknownGroup(name.to_string());
    match key.as_str() {
        "Z/2×Z/2" | "Z/2xZ/2" | "Z2xZ2" | "Z2×Z2" | "V4" | "K4" => return Ok("Z/2×Z/2".into()),
        "S3" | "D4" | "Q8" => return Ok(key),
        _ => {}
    }
    let digits = key
        .strip_prefix("Z/")
        .or_else(|| key.strip_prefix("Z_"))
        .or_else(|| key.strip_prefix('Z'))
        .ok_or_else(unknown)?;
    let n: usize = digits.parse().map_err(|_| unknown())?;
    if n == 0 || n > MAX_CYCLIC {
        return Err(unknown());
    }
    Ok(format!("Z/{n}"))
}

/// Z/n with elements named `0..n-1`.
pub fn cyclic(n: usize) -> Groupoid {
    let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    Groupoid::from_cayley(&table, None).expect("cyclic group")
}

/// Z/2×Z/2, elements named `(a,b)` with index `2a + b`.
pub fn klein() -> Groupoid {
    let z2 = cyclic(2);
    Groupoid::product(&z2, &z2)
}

/// S3 as permutations of {1,2,3} in cycle notation.
pub fn symmetric3() -> Groupoid {
    permutation_group(3, &[vec![1, 2, 0], vec![1, 0, 2]])
}

/// D4 as symmetries of a square with vertices 1..4 in cyclic order.
pub fn dihedral4() -> Groupoid {
    permutation_group(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
}

/// Q8 = {±1, ±i, ±j, ±k}.
pub fn quaternion() -> Groupoid {
    // unit index: 0 = 1, 1 = i, 2 = j, 3 = k; element index = 2 * unit + (negative as usize)
    fn unit_mul(a: usize, b: usize) -> (usize, bool) {
        match (a, b) {
            (0, x) | (x, 0) => (x, false),
            (x, y) if x == y => (0, true),
            (1, 2) => (3, false),
            (2, 3) => (1, false),
            (3, 1) => (2, false),
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    }
    let units = ["1", "i", "j", "k"];
    let names: Vec<String> = (0..8)
        .map(|e| format!("{}{}", if e % 2 == 1 { "-" } else { "" }, units[e / 2]))
        .collect();
    let table: Vec<Vec<usize>> = (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (u, neg) = unit_mul(a / 2, b / 2);
                    2 * u + ((neg ^ (a % 2 == 1) ^ (b % 2 == 1)) as usize)
                })
                .collect()
        })
        .collect();
    Groupoid::from_cayley(&table, Some(&names)).expect("quaternion group")
}

/// Closure of the given permutations of `0..degree`; `a·b` applies `a` first.
fn permutation_group(degree: usize, generators: &[Vec<usize>]) -> Groupoid {
    let identity: Vec<usize> = (0..degree).collect();
    let mut elements = vec![identity];
    let mut frontier = 0;
    while frontier < elements.len() {
        let x = elements[frontier].clone();
        for g in generators {
            let y: Vec<usize> = (0..degree).map(|i| g[x[i]]).collect();
            if !elements.contains(&y) {
                elements.push(y);
            }
        }
        frontier += 1;
    }
    let index = |p: &Vec<usize>| elements.iter().position(|q| q == p).expect("closed");
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| index(&(0..degree).map(|i| b[a[i]]).collect()))
                .collect()
        })
        .collect();
    let names: Vec<String> = elements.iter().map(|p| cycle_notation(p)).collect();
    Groupoid::from_cayley(&table, Some(&names)).expect("permutation group")
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            out.push_str(&(i + 1).to_string());
            i = p[i];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let expected = [1, 2, 3, 4, 5, 6, 7, 8, 4, 6, 8, 8];
        for (name, n) in NAMES.iter().zip(expected) {
            let g = group(name).unwrap();
            assert_eq!(g.n_morphisms(), n, "{name}");
            assert_eq!(g.identity(0), 0, "{name}");
        }
    }

    #[test]
    fn shorthand_spellings() {
        assert_eq!(group("Z5").unwrap(), cyclic(5));
        assert_eq!(group("Z_5").unwrap(), cyclic(5));
        assert_eq!(group("Z/16").unwrap().n_morphisms(), 16);
        assert_eq!(group("V4").unwrap(), klein());
        assert!(matches!(group("Z/17"), Err(Error::UnknownGroup(_))));
        assert!(matches!(group("Z/0"), Err(Error::UnknownGroup(_))));
        assert!(matches!(group("A5"), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn z2_shape() {
        let g = group("Z/2").unwrap();
        assert_eq!(g.name(0), "0");
        assert_eq!(g.inverse(1), 1);
        assert_eq!(g.compose(1, 1), Some(0));
    }

    #[test]
    fn nonabelian_members() {
        for name in ["S3", "D4", "Q8"] {
            assert!(!group(name).unwrap().is_abelian(), "{name}");
        }
        let q8 = quaternion();
        let (i, j, k) = (
            q8.find_morphism("i").unwrap(),
            q8.find_morphism("j").unwrap(),
            q8.find_morphism("k").unwrap(),
        );
        assert_eq!(q8.compose(i, j), Some(k));
        assert_eq!(q8.name(q8.compose(j, i).unwrap()), "-k");
        assert_eq!(q8.order(i), 4);
        // Q8 has a unique element of order 2, D4 has five.
        let involutions = |g: &Groupoid| (0..g.n_morphisms()).filter(|&f| g.order(f) == 2).count();
        assert_eq!(involutions(&q8), 1);
        assert_eq!(involutions(&dihedral4()), 5);
    }

    #[test]
    fn canonical_names() {
        assert_eq!(canonical_name("Z5").unwrap(), "Z/5");
        assert_eq!(canonical_name("V4").unwrap(), "Z/2×Z/2");
        assert_eq!(canonical_name("Z/4").unwrap(), "Z/4");
    }
}
