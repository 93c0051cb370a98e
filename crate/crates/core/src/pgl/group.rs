use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::{GroupError, Mobius, ProjPoint};
use crate::field::{FieldCtx, FieldElem};

/// Largest subgroup the closure routine will enumerate.
pub const MAX_GROUP_ORDER: usize = 1 << 16;

/// Finite subgroup of PGL(2, q) in canonical order: identity first, then by
/// row-major entry encodings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    field: FieldCtx,
    elements: Vec<Mobius>,
}

/// Orbits of a group on the rational places.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitStructure {
    /// Orbits of full size; member `j` is `sigma_j(representative)`.
    pub free_orbits: Vec<Vec<ProjPoint>>,
    /// Points with a nontrivial stabilizer, ascending.
    pub ramified: Vec<ProjPoint>,
}

/// Which dihedral family to build in even characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DihedralKind {
    /// Rotation order dividing `q + 1`.
    QPlus,
    /// Rotation order dividing `q - 1`.
    QMinus,
}

/// Serializable description of a subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    /// Cyclic subgroup of order `d` dividing `q + 1`.
    CyclicQplus1 {
        d: u64,
        /// `(a, b)` of a primitive `x^2 + a x + b`; searched when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quadratic: Option<[i64; 2]>,
    },
    /// `{a x + b : a in H, b in W}` with `|H| = u` and `|W| = p^v`.
    Affine {
        u: u64,
        v: u32,
        /// Explicit additive subgroup W; built canonically when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        w: Option<Vec<i64>>,
    },
    /// Dihedral group of order `2u`, `q` even.
    Dihedral {
        u: u64,
        variant: DihedralKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quadratic: Option<[i64; 2]>,
    },
    /// Closure of the listed matrices.
    Explicit { generators: Vec<[[i64; 2]; 2]> },
}

impl GroupTable {
    /// Subgroup generated by `gens`.
    pub fn generate(field: &FieldCtx, gens: &[Mobius]) -> Result<Self, GroupError> {
        let mut seen: HashSet<[u32; 4]> = HashSet::new();
        let id = Mobius::identity(field);
        let mut all = vec![id.clone()];
        seen.insert(id.raw());
        let mut frontier = vec![id];
        while let Some(g) = frontier.pop() {
            for s in gens {
                let h = g.compose(s)?;
                if seen.insert(h.raw()) {
                    if all.len() >= MAX_GROUP_ORDER {
                        return Err(GroupError::Invalid("generated group is too large".into()));
                    }
                    all.push(h.clone());
                    frontier.push(h);
                }
            }
        }
        Ok(Self::from_elements(field, all))
    }

    fn from_elements(field: &FieldCtx, mut elements: Vec<Mobius>) -> Self {
        elements.sort_by_key(|m| (!m.is_identity(), m.raw()));
        GroupTable { field: field.clone(), elements }
    }

    pub fn from_spec(field: &FieldCtx, spec: &GroupSpec) -> Result<Self, GroupError> {
        let quad = |q: &Option<[i64; 2]>| -> Result<Option<(FieldElem, FieldElem)>, GroupError> {
            match q {
                None => Ok(None),
                Some([a, b]) => Ok(Some((field.elem(*a)?, field.elem(*b)?))),
            }
        };
        match spec {
            GroupSpec::CyclicQplus1 { d, quadratic } => subgroup_cyclic_qplus1(field, *d, quad(quadratic)?),
            GroupSpec::Affine { u, v, w } => {
                let w = match w {
                    None => None,
                    Some(list) => Some(list.iter().map(|&x| field.elem(x)).collect::<Result<Vec<_>, _>>()?),
                };
                subgroup_affine(field, *u, *v, w)
            }
            GroupSpec::Dihedral { u, variant, quadratic } => subgroup_dihedral(field, *u, *variant, quad(quadratic)?),
            GroupSpec::Explicit { generators } => {
                let gens = generators
                    .iter()
                    .map(|m| Mobius::from_values(field, *m))
                    .collect::<Result<Vec<_>, _>>()?;
                Self::generate(field, &gens)
            }
        }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mobius] {
        &self.elements
    }

    pub fn contains(&self, m: &Mobius) -> bool {
        self.elements.binary_search_by_key(&(!m.is_identity(), m.raw()), |e| (!e.is_identity(), e.raw())).is_ok()
    }

    pub fn is_subgroup_of(&self, g: &GroupTable) -> bool {
        self.field == g.field && self.elements.iter().all(|h| g.contains(h))
    }

    /// Whether `self` is normal in `g` (and a subgroup of it).
    pub fn is_normal_in(&self, g: &GroupTable) -> bool {
        self.is_subgroup_of(g)
            && g.elements.iter().all(|s| {
                let si = s.inverse();
                self.elements.iter().all(|h| self.contains(&s.compose(h).unwrap().compose(&si).unwrap()))
            })
    }

    /// Left cosets `sigma H` of `h` in `self`: representatives in canonical
    /// order (first element of each coset), identity first.
    pub fn left_coset_reps(&self, h: &GroupTable) -> Result<Vec<Mobius>, GroupError> {
        if !h.is_subgroup_of(self) {
            return Err(GroupError::NotSubgroup);
        }
        let mut covered: HashSet<[u32; 4]> = HashSet::new();
        let mut reps = Vec::new();
        for s in &self.elements {
            if covered.contains(&s.raw()) {
                continue;
            }
            for t in &h.elements {
                covered.insert(s.compose(t)?.raw());
            }
            reps.push(s.clone());
        }
        Ok(reps)
    }

    /// Orbit of `p`, listed as `sigma_j(p)` in group order.
    pub fn orbit(&self, p: ProjPoint) -> Vec<ProjPoint> {
        self.elements.iter().map(|s| s.place_image(p)).collect()
    }

    pub fn split_structure(&self) -> SplitStructure {
        let mut visited: BTreeSet<ProjPoint> = BTreeSet::new();
        let mut free_orbits = Vec::new();
        let mut ramified = Vec::new();
        for p in ProjPoint::all(&self.field) {
            if visited.contains(&p) {
                continue;
            }
            let orbit = self.orbit(p);
            let distinct: BTreeSet<ProjPoint> = orbit.iter().copied().collect();
            visited.extend(distinct.iter().copied());
            if distinct.len() == orbit.len() {
                free_orbits.push(orbit);
            } else {
                ramified.extend(distinct);
            }
        }
        ramified.sort();
        SplitStructure { free_orbits, ramified }
    }
}

/// The order-`q + 1` element `x -> 1/(-b x - a)` for a primitive `x^2 + a x + b`.
pub fn singer_generator(field: &FieldCtx, quadratic: Option<(FieldElem, FieldElem)>) -> Result<Mobius, GroupError> {
    let (a, b) = match quadratic {
        Some((a, b)) => {
            if !field.primitive_quadratic_check(a, b) {
                return Err(GroupError::NotPrimitive);
            }
            (a, b)
        }
        None => field.primitive_quadratic_search(),
    };
    let eta = Mobius::new(field, field.zero(), field.one(), field.neg(b), field.neg(a))?;
    let q1 = field.q() as u64 + 1;
    if eta.order() != q1 {
        return Err(GroupError::Invalid(format!("generator order {} differs from q + 1 = {q1}", eta.order())));
    }
    Ok(eta)
}

/// Cyclic subgroup of order `d`, generated by `eta^((q+1)/d)`.
pub fn subgroup_cyclic_qplus1(
    field: &FieldCtx,
    d: u64,
    quadratic: Option<(FieldElem, FieldElem)>,
) -> Result<GroupTable, GroupError> {
    let q1 = field.q() as u64 + 1;
    if d == 0 || !q1.is_multiple_of(d) {
        return Err(GroupError::Invalid(format!("order {d} does not divide q + 1 = {q1}")));
    }
    let eta = singer_generator(field, quadratic)?;
    let g = GroupTable::generate(field, &[eta.pow(q1 / d)])?;
    debug_assert_eq!(g.order() as u64, d);
    Ok(g)
}

/// Elements of the subfield GF(p^e).
fn subfield(field: &FieldCtx, e: u32) -> Vec<FieldElem> {
    let pe = (field.p() as u64).pow(e);
    field.elements().filter(|&a| field.pow(a, pe as i64).unwrap() == a).collect()
}

/// Affine group `{a x + b : a in H, b in W}`; `H` is the order-`u` subgroup of
/// the multiplicative group and `W` an additive subgroup of size `p^v` closed
/// under multiplication by `H`.
pub fn subgroup_affine(field: &FieldCtx, u: u64, v: u32, w: Option<Vec<FieldElem>>) -> Result<GroupTable, GroupError> {
    let q = field.q() as u64;
    if u == 0 || !(q - 1).is_multiple_of(u) {
        return Err(GroupError::Invalid(format!("u = {u} does not divide q - 1 = {}", q - 1)));
    }
    if v > field.s() {
        return Err(GroupError::Invalid(format!("v = {v} exceeds the extension degree")));
    }
    let omega = field.primitive_element();
    let h0 = field.pow(omega, ((q - 1) / u) as i64)?;
    let hset: Vec<FieldElem> = (0..u).map(|i| field.pow(h0, i as i64).unwrap()).collect();
    let target = (field.p() as u64).pow(v) as usize;
    let w = match w {
        Some(w) => w,
        None => {
            // Span over the smallest subfield containing H.
            let l = (1..=field.s())
                .find(|&t| ((field.p() as u64).pow(t) - 1) % u == 0)
                .expect("u divides q - 1");
            if !v.is_multiple_of(l) {
                return Err(GroupError::Invalid(format!(
                    "|W| = p^{v} cannot be a GF(p^{l})-subspace; v must be a multiple of {l}"
                )));
            }
            let scalars = subfield(field, l);
            let mut span: BTreeSet<FieldElem> = [field.zero()].into();
            for cand in field.elements() {
                if span.len() >= target {
                    break;
                }
                if span.contains(&cand) {
                    continue;
                }
                let mut next = span.clone();
                for &base in &span {
                    for &c in &scalars {
                        next.insert(field.add(base, field.mul(c, cand)));
                    }
                }
                span = next;
            }
            span.into_iter().collect()
        }
    };
    let wset: BTreeSet<FieldElem> = w.iter().copied().collect();
    if wset.len() != target || !wset.contains(&field.zero()) {
        return Err(GroupError::Invalid(format!("W must be an additive subgroup of size {target}")));
    }
    for &x in &wset {
        for &y in &wset {
            if !wset.contains(&field.sub(x, y)) {
                return Err(GroupError::Invalid("W is not closed under subtraction".into()));
            }
        }
        for &a in &hset {
            if !wset.contains(&field.mul(a, x)) {
                return Err(GroupError::Invalid("W is not closed under multiplication by H".into()));
            }
        }
    }
    let mut elements = Vec::with_capacity(hset.len() * wset.len());
    for &a in &hset {
        for &b in &wset {
            elements.push(Mobius::new(field, a, b, field.zero(), field.one())?);
        }
    }
    Ok(GroupTable::from_elements(field, elements))
}

/// Dihedral subgroup of order `2u` in characteristic 2.
///
/// `QPlus` uses the rotation `eta(x) = 1/(b x + a)` of order `q + 1` and the
/// reflection `tau(x) = 1/(b x)`; `QMinus` uses `x -> w x` for a primitive
/// `w` and `tau(x) = 1/x`.
pub fn subgroup_dihedral(
    field: &FieldCtx,
    u: u64,
    variant: DihedralKind,
    quadratic: Option<(FieldElem, FieldElem)>,
) -> Result<GroupTable, GroupError> {
    if field.p() != 2 {
        return Err(GroupError::Invalid("dihedral subgroups are built in characteristic 2 only".into()));
    }
    let q = field.q() as u64;
    let (rot, tau) = match variant {
        DihedralKind::QPlus => {
            if u < 2 || !(q + 1).is_multiple_of(u) {
                return Err(GroupError::Invalid(format!("u = {u} must be at least 2 and divide q + 1")));
            }
            let (a, b) = match quadratic {
                Some(ab) => ab,
                None => field.primitive_quadratic_search(),
            };
            let eta = singer_generator(field, Some((a, b)))?;
            let tau = Mobius::new(field, field.zero(), field.one(), b, field.zero())?;
            (eta.pow((q + 1) / u), tau)
        }
        DihedralKind::QMinus => {
            if u < 2 || !(q - 1).is_multiple_of(u) {
                return Err(GroupError::Invalid(format!("u = {u} must be at least 2 and divide q - 1")));
            }
            let w = field.primitive_element();
            let eta = Mobius::new(field, w, field.zero(), field.zero(), field.one())?;
            let tau = Mobius::new(field, field.zero(), field.one(), field.one(), field.zero())?;
            (eta.pow((q - 1) / u), tau)
        }
    };
    let g = GroupTable::generate(field, &[rot.clone(), tau.clone()])?;
    let reflected = tau.compose(&rot)?.compose(&tau)?;
    if g.order() as u64 != 2 * u || reflected != rot.inverse() {
        return Err(GroupError::Invalid("generators do not satisfy the dihedral relations".into()));
    }
    Ok(g)
}
