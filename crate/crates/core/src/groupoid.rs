//! Finite groupoids with explicit composition tables.
//!
//! Composition is written in diagrammatic order throughout the crate:
//! `compose(f, g)` is "f then g" and is defined iff `tgt(f) == src(g)`.
//! For a group viewed as a one-object groupoid this means
//! `compose(a, b)` is the Cayley-table product `a·b`.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};

pub type ObjId = usize;
pub type MorId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Morphism {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// A finite groupoid whose axioms have been checked exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupoid {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    // compose[f * m + g] = f then g
    compose: Vec<Option<MorId>>,
    identity: Vec<MorId>,
    inverse: Vec<MorId>,
    // hom[a * n + b] = morphisms a -> b, sorted by id
    hom: Vec<Vec<MorId>>,
    skeletal: bool,
}

/// Raw description of a groupoid, before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidSpec {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, String, String)>,
    pub compose: Vec<(String, String, String)>,
}

impl Groupoid {
    /// Checks every axiom by enumeration and builds the lookup tables.
    pub fn validate(spec: &GroupoidSpec) -> Result<Groupoid> {
        let mut obj_index = HashMap::new();
        for (i, o) in spec.objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(Error::DuplicateId(o.clone()));
            }
        }
        let mut mor_index = HashMap::new();
        let mut morphisms = Vec::with_capacity(spec.morphisms.len());
        for (i, (name, s, t)) in spec.morphisms.iter().enumerate() {
            if mor_index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateId(name.clone()));
            }
            let src = *obj_index.get(s).ok_or_else(|| Error::UnknownId(s.clone()))?;
            let tgt = *obj_index.get(t).ok_or_else(|| Error::UnknownId(t.clone()))?;
            morphisms.push(Morphism { name: name.clone(), src, tgt });
        }
        let m = morphisms.len();
        let mut compose = vec![None; m * m];
        for (f, g, h) in &spec.compose {
            let look = |x: &String| mor_index.get(x).copied().ok_or_else(|| Error::UnknownId(x.clone()));
            let (fi, gi, hi) = (look(f)?, look(g)?, look(h)?);
            if morphisms[fi].tgt != morphisms[gi].src {
                return Err(Error::NotComposable(f.clone(), g.clone()));
            }
            if morphisms[hi].src != morphisms[fi].src || morphisms[hi].tgt != morphisms[gi].tgt {
                return Err(Error::BadEndpoints(f.clone(), g.clone()));
            }
            match compose[fi * m + gi] {
                Some(prev) if prev != hi => return Err(Error::DuplicateId(format!("({f}, {g})"))),
                _ => compose[fi * m + gi] = Some(hi),
            }
        }
        Self::from_tables(spec.objects.clone(), morphisms, compose)
    }

    pub(crate) fn from_tables(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        compose: Vec<Option<MorId>>,
    ) -> Result<Groupoid> {
        let n = objects.len();
        let m = morphisms.len();
        let name = |f: MorId| morphisms[f].name.clone();
        for f in 0..m {
            for g in 0..m {
                if morphisms[f].tgt == morphisms[g].src && compose[f * m + g].is_none() {
                    return Err(Error::MissingComposite(name(f), name(g)));
                }
            }
        }
        let c = |f: MorId, g: MorId| compose[f * m + g];
        for f in 0..m {
            for g in 0..m {
                let Some(fg) = c(f, g) else { continue };
                for h in 0..m {
                    let Some(fg_h) = c(fg, h) else { continue };
                    let g_h = c(g, h).expect("composable");
                    if c(f, g_h) != Some(fg_h) {
                        return Err(Error::AssociativityViolation(name(f), name(g), name(h)));
                    }
                }
            }
        }
        let mut hom = vec![Vec::new(); n * n];
        for (f, mor) in morphisms.iter().enumerate() {
            hom[mor.src * n + mor.tgt].push(f);
        }
        let mut identity = Vec::with_capacity(n);
        for a in 0..n {
            let candidates: Vec<MorId> = hom[a * n + a]
                .iter()
                .copied()
                .filter(|&e| {
                    (0..m).all(|f| {
                        (morphisms[f].src != a || c(e, f) == Some(f))
                            && (morphisms[f].tgt != a || c(f, e) == Some(f))
                    })
                })
                .collect();
            if candidates.len() != 1 {
                return Err(Error::NonUniqueIdentity(objects[a].clone()));
            }
            identity.push(candidates[0]);
        }
        let mut inverse = Vec::with_capacity(m);
        for f in 0..m {
            let (s, t) = (morphisms[f].src, morphisms[f].tgt);
            let inv = hom[t * n + s]
                .iter()
                .copied()
                .find(|&g| c(f, g) == Some(identity[s]) && c(g, f) == Some(identity[t]))
                .ok_or_else(|| Error::MissingInverse(name(f)))?;
            inverse.push(inv);
        }
        let skeletal = morphisms.iter().all(|f| f.src == f.tgt);
        Ok(Groupoid { objects, morphisms, compose, identity, inverse, hom, skeletal })
    }

    /// The groupoid with one object and one morphism.
    pub fn trivial() -> Groupoid {
        Groupoid::from_tables(
            vec!["*".into()],
            vec![Morphism { name: "id".into(), src: 0, tgt: 0 }],
            vec![Some(0)],
        )
        .expect("trivial groupoid")
    }

    /// The groupoid with no objects.
    pub fn empty() -> Groupoid {
        Groupoid::from_tables(vec![], vec![], vec![]).expect("empty groupoid")
    }

    /// A group given by its multiplication table, seen as a one-object groupoid.
    ///
    /// `table[a][b]` is the product `a·b`, which becomes `compose(a, b)`.
    pub fn from_cayley(table: &[Vec<usize>], names: Option<&[String]>) -> Result<Groupoid> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(Error::NotAGroup("table is not square".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::NotAGroup("entry out of range".into()));
        }
        for i in 0..n {
            let row: HashSet<usize> = table[i].iter().copied().collect();
            let col: HashSet<usize> = (0..n).map(|j| table[j][i]).collect();
            if row.len() != n || col.len() != n {
                return Err(Error::NotAGroup("not a Latin square".into()));
            }
        }
        let names: Vec<String> = match names {
            Some(ns) if ns.len() == n => ns.to_vec(),
            Some(_) => return Err(Error::NotAGroup("name count differs from order".into())),
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let morphisms = names
            .iter()
            .map(|name| Morphism { name: name.clone(), src: 0, tgt: 0 })
            .collect();
        let compose = (0..n * n).map(|k| Some(table[k / n][k % n])).collect();
        Groupoid::from_tables(vec!["*".into()], morphisms, compose)
            .map_err(|e| Error::NotAGroup(e.to_string()))
    }

    /// One object per element, identities only.
    pub fn discrete<S: AsRef<str>>(elements: &[S]) -> Result<Groupoid> {
        if elements.is_empty() {
            return Err(Error::EmptySet);
        }
        let objects: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let n = objects.len();
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism { name: format!("id_{o}"), src: i, tgt: i })
            .collect();
        let compose = (0..n * n).map(|k| if k / n == k % n { Some(k / n) } else { None }).collect();
        Groupoid::from_tables(objects, morphisms, compose)
    }

    /// Cartesian product; object `(a, b)` has index `a * |Ob(h)| + b`, likewise for morphisms.
    pub fn product(g: &Groupoid, h: &Groupoid) -> Groupoid {
        let (n2, m2) = (h.n_objects(), h.n_morphisms());
        let objects = g
            .objects
            .iter()
            .flat_map(|a| h.objects.iter().map(move |b| format!("({a},{b})")))
            .collect();
        let morphisms = g
            .morphisms
            .iter()
            .flat_map(|f| {
                h.morphisms.iter().map(move |k| Morphism {
                    name: format!("({},{})", f.name, k.name),
                    src: f.src * n2 + k.src,
                    tgt: f.tgt * n2 + k.tgt,
                })
            })
            .collect::<Vec<_>>();
        let m = morphisms.len();
        let mut compose = vec![None; m * m];
        for x in 0..m {
            for y in 0..m {
                let (f1, k1, f2, k2) = (x / m2, x % m2, y / m2, y % m2);
                if let (Some(f), Some(k)) = (g.compose(f1, f2), h.compose(k1, k2)) {
                    compose[x * m + y] = Some(f * m2 + k);
                }
            }
        }
        Groupoid::from_tables(objects, morphisms, compose).expect("product of groupoids")
    }

    /// Side-by-side copy with no morphisms between the two halves.
    pub fn disjoint_union(g: &Groupoid, h: &Groupoid) -> Groupoid {
        let (n1, m1) = (g.n_objects(), g.n_morphisms());
        let tag = |side: &str, s: &String| format!("{side}.{s}");
        let objects = g
            .objects
            .iter()
            .map(|o| tag("l", o))
            .chain(h.objects.iter().map(|o| tag("r", o)))
            .collect();
        let morphisms: Vec<Morphism> = g
            .morphisms
            .iter()
            .map(|f| Morphism { name: tag("l", &f.name), src: f.src, tgt: f.tgt })
            .chain(h.morphisms.iter().map(|f| Morphism {
                name: tag("r", &f.name),
                src: f.src + n1,
                tgt: f.tgt + n1,
            }))
            .collect();
        let m = morphisms.len();
        let mut compose = vec![None; m * m];
        for x in 0..m {
            for y in 0..m {
                compose[x * m + y] = match (x < m1, y < m1) {
                    (true, true) => g.compose(x, y),
                    (false, false) => h.compose(x - m1, y - m1).map(|z| z + m1),
                    _ => None,
                };
            }
        }
        Groupoid::from_tables(objects, morphisms, compose).expect("disjoint union")
    }

    /// Collapses each connected component to its least object.
    ///
    /// The endomorphisms of the representative are kept verbatim; the witness
    /// records, for every original object, its representative and the least
    /// connecting morphism `rep -> object`.
    pub fn skeletalize(&self) -> (Groupoid, SkeletalWitness) {
        let n = self.n_objects();
        let mut rep = vec![usize::MAX; n];
        let mut connecting = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for a in 0..n {
            if rep[a] != usize::MAX {
                continue;
            }
            reps.push(a);
            for b in a..n {
                if let Some(&f) = self.hom(a, b).first() {
                    if rep[b] == usize::MAX {
                        rep[b] = a;
                        connecting[b] = f;
                    }
                }
            }
        }
        let new_obj: HashMap<ObjId, ObjId> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut kept = Vec::new();
        let mut morphisms = Vec::new();
        let mut old_to_new = BTreeMap::new();
        for &r in &reps {
            for &f in self.hom(r, r) {
                old_to_new.insert(f, kept.len());
                kept.push(f);
                let o = new_obj[&r];
                morphisms.push(Morphism { name: self.morphisms[f].name.clone(), src: o, tgt: o });
            }
        }
        let m = kept.len();
        let mut compose = vec![None; m * m];
        for (x, &f) in kept.iter().enumerate() {
            for (y, &g) in kept.iter().enumerate() {
                compose[x * m + y] = self.compose(f, g).map(|z| old_to_new[&z]);
            }
        }
        let objects = reps.iter().map(|&r| self.objects[r].clone()).collect();
        let skeleton = Groupoid::from_tables(objects, morphisms, compose).expect("skeleton");
        let witness = SkeletalWitness {
            representative: rep.iter().map(|r| new_obj[r]).collect(),
            connecting,
            endomorphism: old_to_new,
        };
        (skeleton, witness)
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn object_name(&self, a: ObjId) -> &str {
        &self.objects[a]
    }

    pub fn name(&self, f: MorId) -> &str {
        &self.morphisms[f].name
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.morphisms[f].src
    }

    pub fn tgt(&self, f: MorId) -> ObjId {
        self.morphisms[f].tgt
    }

    /// `f` then `g`, if composable.
    pub fn compose(&self, f: MorId, g: MorId) -> Option<MorId> {
        self.compose[f * self.morphisms.len() + g]
    }

    /// Composite of a sequence known to be composable, in diagrammatic order.
    pub fn compose_all(&self, fs: &[MorId]) -> MorId {
        let mut it = fs.iter();
        let first = *it.next().expect("nonempty composite");
        it.fold(first, |acc, &g| self.compose(acc, g).expect("composable sequence"))
    }

    pub fn identity(&self, a: ObjId) -> MorId {
        self.identity[a]
    }

    pub fn inverse(&self, f: MorId) -> MorId {
        self.inverse[f]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identity[self.src(f)] == f
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.hom[a * self.objects.len() + b]
    }

    pub fn end(&self, a: ObjId) -> &[MorId] {
        self.hom(a, a)
    }

    /// Morphisms with the given source.
    pub fn from_object(&self, a: ObjId) -> impl Iterator<Item = MorId> + '_ {
        (0..self.n_objects()).flat_map(move |b| self.hom(a, b).iter().copied())
    }

    /// Morphisms with the given target.
    pub fn into_object(&self, b: ObjId) -> impl Iterator<Item = MorId> + '_ {
        (0..self.n_objects()).flat_map(move |a| self.hom(a, b).iter().copied())
    }

    pub fn is_skeletal(&self) -> bool {
        self.skeletal
    }

    pub fn is_group(&self) -> bool {
        self.objects.len() == 1
    }

    pub fn is_trivial(&self) -> bool {
        self.objects.len() == 1 && self.morphisms.len() == 1
    }

    pub fn is_abelian(&self) -> bool {
        let m = self.n_morphisms();
        (0..m).all(|f| (0..m).all(|g| self.compose(f, g) == self.compose(g, f)))
    }

    pub fn find_morphism(&self, name: &str) -> Option<MorId> {
        self.morphisms.iter().position(|f| f.name == name)
    }

    pub fn find_object(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    /// Order of a morphism in its endomorphism group.
    pub fn order(&self, f: MorId) -> usize {
        let id = self.identity(self.src(f));
        let mut x = f;
        let mut k = 1;
        while x != id {
            x = self.compose(x, f).expect("endomorphism");
            k += 1;
        }
        k
    }

    /// A `GroupoidSpec` that reproduces this groupoid, one compose triple per composable pair.
    pub fn to_spec(&self) -> GroupoidSpec {
        let m = self.n_morphisms();
        let mut compose = Vec::new();
        for f in 0..m {
            for g in 0..m {
                if let Some(h) = self.compose(f, g) {
                    compose.push((self.name(f).into(), self.name(g).into(), self.name(h).into()));
                }
            }
        }
        GroupoidSpec {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|f| (f.name.clone(), self.objects[f.src].clone(), self.objects[f.tgt].clone()))
                .collect(),
            compose,
        }
    }
}

/// How an object of the original groupoid maps into its skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletalWitness {
    /// Original object -> skeleton object.
    pub representative: Vec<ObjId>,
    /// Original object `b` -> least morphism `rep(b) -> b` in the original groupoid.
    pub connecting: Vec<MorId>,
    endomorphism: BTreeMap<MorId, MorId>,
}

impl SkeletalWitness {
    /// Transports `f: a -> b` to the endomorphism `c_a ; f ; c_b⁻¹` of the representative.
    pub fn transport(&self, original: &Groupoid, f: MorId) -> MorId {
        let (a, b) = (original.src(f), original.tgt(f));
        let loop_ = original.compose_all(&[
            self.connecting[a],
            f,
            original.inverse(self.connecting[b]),
        ]);
        self.endomorphism[&loop_]
    }
}
