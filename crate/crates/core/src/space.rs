//! Finite models of `ℓ_p(Γ)` and `c₀(Γ)`.
//!
//! A model is a [`SpaceDescriptor`]: the norm kind plus a coordinate universe
//! `Γ = {0, 1, …, n−1}`. Vectors are finitely supported and kept in canonical
//! form (sorted by label, no stored zeros), so structural equality is
//! mathematical equality.

use std::fmt;
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::echelon::{Echelon, SparseRow};
use crate::error::{Error, Result};
use crate::scalar::{Approx, Exponent, Scalar};

/// Index of a coordinate in the universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoordinateLabel(pub u64);

impl fmt::Display for CoordinateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for CoordinateLabel {
    fn from(v: u64) -> Self {
        CoordinateLabel(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Lp(Exponent),
    /// Sup-norm model; also serves as the dual model of `ℓ₁`.
    C0,
}

/// Serialised as `{"space": "lp" | "c0", "p": [num, den], "universe_size": n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "SpaceRepr", try_from = "SpaceRepr")]
pub struct SpaceDescriptor {
    kind: SpaceKind,
    universe_size: u64,
}

impl SpaceDescriptor {
    pub fn lp(p: Exponent, universe_size: u64) -> Result<Self> {
        if p < Exponent::one() {
            return Err(Error::ExponentBelowOne(p.to_string()));
        }
        Ok(SpaceDescriptor {
            kind: SpaceKind::Lp(p),
            universe_size,
        })
    }

    pub fn c0(universe_size: u64) -> Self {
        SpaceDescriptor {
            kind: SpaceKind::C0,
            universe_size,
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn exponent(&self) -> Option<Exponent> {
        match self.kind {
            SpaceKind::Lp(p) => Some(p),
            SpaceKind::C0 => None,
        }
    }

    pub fn universe_size(&self) -> u64 {
        self.universe_size
    }

    pub fn contains(&self, label: CoordinateLabel) -> bool {
        label.0 < self.universe_size
    }

    pub fn labels(&self) -> impl Iterator<Item = CoordinateLabel> {
        (0..self.universe_size).map(CoordinateLabel)
    }

    /// `p*` with `1/p + 1/p* = 1`, defined for `p > 1`.
    pub fn conjugate_exponent(&self) -> Option<Exponent> {
        match self.kind {
            SpaceKind::Lp(p) if p > Exponent::one() => Some(p / (p - Exponent::one())),
            _ => None,
        }
    }

    /// `1 < p < ∞`.
    pub fn is_reflexive(&self) -> bool {
        self.conjugate_exponent().is_some()
    }

    /// The model of the dual: `ℓ_p ↔ ℓ_{p*}` for `p > 1`, `ℓ₁ ↔ c₀`.
    pub fn dual(&self) -> SpaceDescriptor {
        let kind = match self.kind {
            SpaceKind::Lp(p) if p == Exponent::one() => SpaceKind::C0,
            SpaceKind::Lp(_) => SpaceKind::Lp(self.conjugate_exponent().expect("p > 1")),
            SpaceKind::C0 => SpaceKind::Lp(Exponent::one()),
        };
        SpaceDescriptor {
            kind,
            universe_size: self.universe_size,
        }
    }

    /// Same universe, different norm.
    pub fn with_kind(&self, kind: SpaceKind) -> SpaceDescriptor {
        SpaceDescriptor {
            kind,
            universe_size: self.universe_size,
        }
    }

    pub(crate) fn check_same(&self, other: &SpaceDescriptor) -> Result<()> {
        if self != other {
            return Err(Error::SpaceMismatch {
                expected: self.to_string(),
                found: other.to_string(),
            });
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<(u64, u64)>,
    universe_size: u64,
}

impl From<SpaceDescriptor> for SpaceRepr {
    fn from(d: SpaceDescriptor) -> Self {
        match d.kind {
            SpaceKind::Lp(p) => SpaceRepr {
                space: "lp".into(),
                p: Some((*p.numer(), *p.denom())),
                universe_size: d.universe_size,
            },
            SpaceKind::C0 => SpaceRepr {
                space: "c0".into(),
                p: None,
                universe_size: d.universe_size,
            },
        }
    }
}

impl TryFrom<SpaceRepr> for SpaceDescriptor {
    type Error = Error;

    fn try_from(r: SpaceRepr) -> Result<Self> {
        match (r.space.as_str(), r.p) {
            ("lp", Some((num, den))) if den > 0 => {
                SpaceDescriptor::lp(Exponent::new(num, den), r.universe_size)
            }
            ("lp", _) => Err(Error::Config("lp space needs \"p\": [num, den]".into())),
            ("c0", _) => Ok(SpaceDescriptor::c0(r.universe_size)),
            (other, _) => Err(Error::Config(format!("unknown space kind {other:?}"))),
        }
    }
}

impl fmt::Display for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpaceKind::Lp(p) => write!(f, "l_{}[{}]", p, self.universe_size),
            SpaceKind::C0 => write!(f, "c0[{}]", self.universe_size),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseVector<S> {
    space: Arc<SpaceDescriptor>,
    entries: Vec<(CoordinateLabel, S)>,
}

impl<S: Scalar> SparseVector<S> {
    /// Canonicalises `entries`: zeros dropped, sorted by label. Repeated
    /// labels and labels outside the universe are rejected.
    pub fn new(
        space: Arc<SpaceDescriptor>,
        entries: impl IntoIterator<Item = (CoordinateLabel, S)>,
    ) -> Result<Self> {
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_by_key(|(l, _)| *l);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateLabel(w[0].0));
            }
        }
        if let Some((label, _)) = entries.iter().find(|(l, _)| !space.contains(*l)) {
            return Err(Error::LabelOutsideUniverse {
                label: *label,
                universe_size: space.universe_size(),
            });
        }
        entries.retain(|(_, v)| !v.is_zero());
        Ok(SparseVector { space, entries })
    }

    /// Builds from a sorted, zero-free row whose labels are known to fit.
    pub(crate) fn from_row(space: Arc<SpaceDescriptor>, row: SparseRow<S>) -> Self {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(row
            .iter()
            .all(|(l, v)| *l < space.universe_size() && !v.is_zero()));
        SparseVector {
            space,
            entries: row
                .into_iter()
                .map(|(l, v)| (CoordinateLabel(l), v))
                .collect(),
        }
    }

    pub fn zero(space: Arc<SpaceDescriptor>) -> Self {
        SparseVector {
            space,
            entries: Vec::new(),
        }
    }

    /// `e_γ`.
    pub fn unit(space: Arc<SpaceDescriptor>, label: CoordinateLabel) -> Result<Self> {
        if !space.contains(label) {
            return Err(Error::LabelOutsideUniverse {
                label,
                universe_size: space.universe_size(),
            });
        }
        Ok(SparseVector {
            space,
            entries: vec![(label, S::one())],
        })
    }

    pub fn space(&self) -> &Arc<SpaceDescriptor> {
        &self.space
    }

    pub fn entries(&self) -> &[(CoordinateLabel, S)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = CoordinateLabel> + '_ {
        self.entries.iter().map(|(l, _)| *l)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, label: CoordinateLabel) -> S {
        match self.entries.binary_search_by_key(&label, |(l, _)| *l) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn values(&self) -> impl Iterator<Item = &S> {
        self.entries.iter().map(|(_, v)| v)
    }

    pub fn to_row(&self) -> SparseRow<S> {
        self.entries.iter().map(|(l, v)| (l.0, v.clone())).collect()
    }

    /// `‖x‖^p` for `ℓ_p` (exact when `p` is an integer), `max |x(γ)|` for `c₀`.
    /// Norm comparisons go through this quantity.
    pub fn norm_pow(&self) -> Approx<S> {
        match self.space.kind() {
            SpaceKind::Lp(p) => S::power_sum(self.values(), p),
            SpaceKind::C0 => Approx::exact(self.sup()),
        }
    }

    /// `‖x‖`, rounded up when it is not representable.
    pub fn norm_upper(&self) -> Approx<S> {
        match self.space.kind() {
            SpaceKind::Lp(p) => S::lp_norm(self.values(), p),
            SpaceKind::C0 => Approx::exact(self.sup()),
        }
    }

    /// `‖x‖` for display.
    pub fn norm(&self) -> f64 {
        match self.space.kind() {
            SpaceKind::Lp(p) => {
                f64::lp_norm(
                    self.values().map(|v| v.to_f64()).collect::<Vec<_>>().iter(),
                    p,
                )
                .value
            }
            SpaceKind::C0 => self.sup().to_f64(),
        }
    }

    /// A positive `c ≤ 1/‖x‖` (equality flagged exact). `None` for zero.
    pub fn reciprocal_norm(&self) -> Option<Approx<S>> {
        if self.is_zero() {
            return None;
        }
        Some(match self.space.kind() {
            SpaceKind::Lp(p) => S::reciprocal_lp_norm(self.values(), p),
            SpaceKind::C0 => Approx::exact(S::one() / self.sup()),
        })
    }

    fn sup(&self) -> S {
        self.values()
            .map(|v| v.abs())
            .fold(S::zero(), |m, v| if v > m { v } else { m })
    }

    pub fn scaled(&self, factor: &S) -> Self {
        if factor.is_zero() {
            return SparseVector::zero(self.space.clone());
        }
        SparseVector {
            space: self.space.clone(),
            entries: self
                .entries
                .iter()
                .map(|(l, v)| (*l, v.clone() * factor.clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// `self + factor·other`. Both vectors must share a universe.
    pub fn add_scaled(&self, factor: &S, other: &SparseVector<S>) -> Result<Self> {
        check_universe(&self.space, &other.space)?;
        let (x, y) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
                out.push(x[i].clone());
                i += 1;
            } else if i == x.len() || y[j].0 < x[i].0 {
                out.push((y[j].0, factor.clone() * y[j].1.clone()));
                j += 1;
            } else {
                out.push((x[i].0, x[i].1.clone() + factor.clone() * y[j].1.clone()));
                i += 1;
                j += 1;
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        Ok(SparseVector {
            space: self.space.clone(),
            entries: out,
        })
    }

    /// `Σ x(γ)·y(γ)` over the common support, ignoring norm kinds.
    pub fn dot(&self, other: &SparseVector<S>) -> S {
        let (x, y) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = S::zero();
        while i < x.len() && j < y.len() {
            match x[i].0.cmp(&y[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc + x[i].1.clone() * y[j].1.clone();
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// The duality bracket `⟨x, f⟩` for `f` in the dual model of `x`'s space.
    pub fn pairing(&self, f: &SparseVector<S>) -> Result<S> {
        check_universe(&self.space, &f.space)?;
        if *f.space != self.space.dual() {
            return Err(Error::NotDualPair {
                left: self.space.to_string(),
                right: f.space.to_string(),
            });
        }
        Ok(self.dot(f))
    }

    /// Converts every value, e.g. from exact to float.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SparseVector<T> {
        SparseVector {
            space: self.space.clone(),
            entries: self
                .entries
                .iter()
                .map(|(l, v)| (*l, f(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// The same coordinates viewed in another model over an equal universe.
    pub fn rehomed(&self, space: Arc<SpaceDescriptor>) -> Result<Self> {
        check_universe(&self.space, &space)?;
        Ok(SparseVector {
            space,
            entries: self.entries.clone(),
        })
    }
}

fn check_universe(a: &SpaceDescriptor, b: &SpaceDescriptor) -> Result<()> {
    if a.universe_size() != b.universe_size() {
        return Err(Error::UniverseMismatch {
            left: a.universe_size(),
            right: b.universe_size(),
        });
    }
    Ok(())
}

/// Ordered family of vectors in one model, keyed by strictly increasing ids.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFamily<S> {
    space: Arc<SpaceDescriptor>,
    members: Vec<(u64, SparseVector<S>)>,
}

impl<S: Scalar> VectorFamily<S> {
    pub fn new(space: Arc<SpaceDescriptor>) -> Self {
        VectorFamily {
            space,
            members: Vec::new(),
        }
    }

    /// Numbers the vectors `0, 1, 2, …`.
    pub fn from_vectors(
        space: Arc<SpaceDescriptor>,
        vectors: impl IntoIterator<Item = SparseVector<S>>,
    ) -> Result<Self> {
        let mut family = VectorFamily::new(space);
        for (id, v) in vectors.into_iter().enumerate() {
            family.push(id as u64, v)?;
        }
        Ok(family)
    }

    pub(crate) fn from_rows(space: Arc<SpaceDescriptor>, rows: Vec<SparseRow<S>>) -> Self {
        let members = rows
            .into_iter()
            .enumerate()
            .map(|(id, row)| (id as u64, SparseVector::from_row(space.clone(), row)))
            .collect();
        VectorFamily { space, members }
    }

    pub fn push(&mut self, id: u64, vector: SparseVector<S>) -> Result<()> {
        self.space.check_same(&vector.space)?;
        if let Some((previous, _)) = self.members.last() {
            if id <= *previous {
                return Err(Error::NonIncreasingId {
                    previous: *previous,
                    id,
                });
            }
        }
        self.members.push((id, vector));
        Ok(())
    }

    pub fn space(&self) -> &Arc<SpaceDescriptor> {
        &self.space
    }

    pub fn members(&self) -> &[(u64, SparseVector<S>)] {
        &self.members
    }

    pub fn vectors(&self) -> impl Iterator<Item = &SparseVector<S>> {
        self.members.iter().map(|(_, v)| v)
    }

    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().map(|(id, _)| *id)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, id: u64) -> Option<&SparseVector<S>> {
        self.members
            .binary_search_by_key(&id, |(i, _)| *i)
            .ok()
            .map(|i| &self.members[i].1)
    }

    /// Members with zero vectors removed, ids preserved.
    pub fn without_zeros(&self) -> Self {
        VectorFamily {
            space: self.space.clone(),
            members: self
                .members
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .cloned()
                .collect(),
        }
    }

    pub fn rows(&self) -> Vec<SparseRow<S>> {
        self.vectors().map(SparseVector::to_row).collect()
    }

    pub fn echelon(&self) -> Echelon<S> {
        Echelon::new(self.rows())
    }

    /// `dim span`.
    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> VectorFamily<T> {
        VectorFamily {
            space: self.space.clone(),
            members: self
                .members
                .iter()
                .map(|(id, v)| (*id, v.map_scalars(&f)))
                .collect(),
        }
    }

    /// The same family viewed in another model over an equal universe.
    pub fn rehomed(&self, space: Arc<SpaceDescriptor>) -> Result<Self> {
        let members = self
            .members
            .iter()
            .map(|(id, v)| Ok((*id, v.rehomed(space.clone())?)))
            .collect::<Result<_>>()?;
        Ok(VectorFamily { space, members })
    }
}

/// Canonical basis of `{x : every row of `rows` annihilates x}` in `target`.
fn null_family<S: Scalar>(echelon: &Echelon<S>, target: Arc<SpaceDescriptor>) -> VectorFamily<S> {
    let null = echelon.null_space(target.universe_size());
    VectorFamily::from_rows(target, Echelon::new(null).into_rows())
}

/// `Y^⊥`: a reduced-echelon basis of the functionals vanishing on `Y`,
/// living in the dual model.
pub fn annihilator<S: Scalar>(y: &VectorFamily<S>) -> VectorFamily<S> {
    null_family(&y.echelon(), Arc::new(y.space().dual()))
}

/// `Z_⊥` for a family `Z` of functionals: a reduced-echelon basis of the
/// vectors every member of `Z` kills, living in the predual model.
pub fn pre_annihilator<S: Scalar>(z: &VectorFamily<S>) -> VectorFamily<S> {
    null_family(&z.echelon(), Arc::new(z.space().dual()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn l2(n: u64) -> Arc<SpaceDescriptor> {
        Arc::new(SpaceDescriptor::lp(Exponent::from_integer(2), n).unwrap())
    }

    fn vec_of(space: &Arc<SpaceDescriptor>, entries: &[(u64, i64)]) -> SparseVector<Rational> {
        SparseVector::new(
            space.clone(),
            entries.iter().map(|&(l, v)| (CoordinateLabel(l), q(v))),
        )
        .unwrap()
    }

    #[test]
    fn norms_of_three_four() {
        let x = vec_of(&l2(3), &[(0, 3), (1, 4)]);
        assert_eq!(x.norm(), 5.0);
        assert_eq!(x.norm_pow(), Approx::exact(q(25)));
        let one = Arc::new(SpaceDescriptor::lp(Exponent::one(), 3).unwrap());
        assert_eq!(x.rehomed(one).unwrap().norm(), 7.0);
        let c0 = Arc::new(SpaceDescriptor::c0(3));
        let x0 = x.rehomed(c0).unwrap();
        assert_eq!(x0.norm(), 4.0);
        assert_eq!(x0.norm_pow(), Approx::exact(q(4)));
        assert_eq!(SparseVector::<Rational>::zero(l2(3)).norm(), 0.0);
    }

    #[test]
    fn unit_vectors_and_pairing() {
        let x_space = l2(3);
        let f_space = Arc::new(x_space.dual());
        let e0 = SparseVector::<Rational>::unit(x_space.clone(), CoordinateLabel(0)).unwrap();
        let f0 = SparseVector::unit(f_space.clone(), CoordinateLabel(0)).unwrap();
        let f1 = SparseVector::unit(f_space.clone(), CoordinateLabel(1)).unwrap();
        assert_eq!(e0.pairing(&f0).unwrap(), q(1));
        assert_eq!(e0.pairing(&f1).unwrap(), q(0));
        assert_eq!(e0.norm(), 1.0);
        assert!(SparseVector::<Rational>::unit(x_space.clone(), CoordinateLabel(3)).is_err());

        let x = vec_of(&x_space, &[(0, 1), (1, 2)]);
        let f = vec_of(&f_space, &[(1, 3), (2, 5)]);
        assert_eq!(x.pairing(&f).unwrap(), q(6));
        assert!(matches!(
            x.pairing(&vec_of(&l2(4), &[(0, 1)])),
            Err(Error::UniverseMismatch { .. })
        ));
        let three = Arc::new(SpaceDescriptor::lp(Exponent::from_integer(3), 3).unwrap());
        assert!(matches!(
            x.pairing(&vec_of(&three, &[(0, 1)])),
            Err(Error::NotDualPair { .. })
        ));
    }

    #[test]
    fn duals() {
        let p = SpaceDescriptor::lp(Exponent::new(3, 2), 5).unwrap();
        assert_eq!(p.conjugate_exponent(), Some(Exponent::from_integer(3)));
        assert_eq!(p.dual().dual(), p);
        let one = SpaceDescriptor::lp(Exponent::one(), 5).unwrap();
        assert_eq!(one.dual(), SpaceDescriptor::c0(5));
        assert_eq!(SpaceDescriptor::c0(5).dual(), one);
        assert!(SpaceDescriptor::lp(Exponent::new(1, 2), 5).is_err());
    }

    #[test]
    fn explicit_zeros_are_dropped() {
        let s = l2(4);
        let a = vec_of(&s, &[(2, 0), (1, 5), (3, 0)]);
        let b = vec_of(&s, &[(1, 5)]);
        assert_eq!(a, b);
        assert!(matches!(
            SparseVector::new(
                s.clone(),
                [(CoordinateLabel(1), q(1)), (CoordinateLabel(1), q(2))]
            ),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn annihilator_of_diagonal_line() {
        let s = l2(3);
        let y = VectorFamily::from_vectors(s.clone(), [vec_of(&s, &[(0, 1), (1, 1)])]).unwrap();
        let z = annihilator(&y);
        assert_eq!(*z.space().as_ref(), s.dual());
        let dual = z.space().clone();
        let got: Vec<_> = z.vectors().cloned().collect();
        assert_eq!(
            got,
            vec![vec_of(&dual, &[(0, 1), (1, -1)]), vec_of(&dual, &[(2, 1)])]
        );
    }

    #[test]
    fn annihilator_edge_cases() {
        let s = l2(3);
        let full = VectorFamily::from_vectors(
            s.clone(),
            (0..3).map(|l| SparseVector::unit(s.clone(), CoordinateLabel(l)).unwrap()),
        )
        .unwrap();
        assert!(annihilator::<Rational>(&full).is_empty());
        let empty = VectorFamily::<Rational>::new(s.clone());
        let all = annihilator(&empty);
        assert_eq!(all.len(), 3);
        for (i, v) in all.vectors().enumerate() {
            assert_eq!(v.entries(), &[(CoordinateLabel(i as u64), q(1))]);
        }
    }

    #[test]
    fn pre_annihilator_of_first_functional() {
        let s = l2(2);
        let dual = Arc::new(s.dual());
        let z = VectorFamily::from_vectors(
            dual.clone(),
            [SparseVector::<Rational>::unit(dual.clone(), CoordinateLabel(0)).unwrap()],
        )
        .unwrap();
        let x = pre_annihilator(&z);
        assert_eq!(*x.space().as_ref(), *s);
        let got: Vec<_> = x.vectors().cloned().collect();
        assert_eq!(
            got,
            vec![SparseVector::unit(s.clone(), CoordinateLabel(1)).unwrap()]
        );
        assert_eq!(
            pre_annihilator(&VectorFamily::<Rational>::new(dual)).len(),
            2
        );
    }

    #[test]
    fn family_ids_must_increase() {
        let s = l2(2);
        let mut fam = VectorFamily::<Rational>::new(s.clone());
        fam.push(3, vec_of(&s, &[(0, 1)])).unwrap();
        assert!(matches!(
            fam.push(3, vec_of(&s, &[(1, 1)])),
            Err(Error::NonIncreasingId { .. })
        ));
        assert!(fam.push(4, vec_of(&l2(3), &[(1, 1)])).is_err());
    }

    #[test]
    fn descriptor_json() {
        let lp = SpaceDescriptor::lp(Exponent::new(3, 2), 7).unwrap();
        let json = serde_json::to_string(&lp).unwrap();
        assert_eq!(json, r#"{"space":"lp","p":[3,2],"universe_size":7}"#);
        assert_eq!(serde_json::from_str::<SpaceDescriptor>(&json).unwrap(), lp);
        let c0 = SpaceDescriptor::c0(4);
        assert_eq!(
            serde_json::to_string(&c0).unwrap(),
            r#"{"space":"c0","universe_size":4}"#
        );
        assert!(serde_json::from_str::<SpaceDescriptor>(
            r#"{"space":"lp","p":[1,2],"universe_size":3}"#
        )
        .is_err());
        assert!(
            serde_json::from_str::<SpaceDescriptor>(r#"{"space":"lp","universe_size":3}"#).is_err()
        );
    }
}
