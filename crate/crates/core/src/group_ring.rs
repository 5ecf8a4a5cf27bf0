//! The rational group ring `Q[H_L]`.
//!
//! The same type models `B_g`, the space with basis `rho[v]` for `v` in `H_L`:
//! `rho[v]` is the group element `v`. The formal boundary values of the two
//! families of torus classes are provided as plain formulas together with the
//! cancellation identities they satisfy.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{is_isotropic, is_unimodular, IndexArith, LatticeParams, ZlVector};
use crate::linalg::{RatVec, Rational};

/// Finitely supported map `H_L -> Q`, keyed by vector index, with no stored zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    params: LatticeParams,
    coeffs: BTreeMap<usize, Rational>,
}

/// `e = theta_coeff * theta + ideal` with `ideal` in the augmentation ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub theta_coeff: Rational,
    pub ideal: GroupRingElement,
}

impl Decomposition {
    pub fn trivial(&self) -> GroupRingElement {
        GroupRingElement::theta(self.ideal.params).scale(&self.theta_coeff)
    }
}

fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

impl GroupRingElement {
    pub fn zero(params: LatticeParams) -> Self {
        Self {
            params,
            coeffs: BTreeMap::new(),
        }
    }

    /// `theta`, the sum of all group elements.
    pub fn theta(params: LatticeParams) -> Self {
        Self {
            params,
            coeffs: (0..params.order()).map(|i| (i, Rational::one())).collect(),
        }
    }

    /// The basis element `rho[v]`, i.e. the group element `v`.
    pub fn rho(v: &ZlVector) -> Self {
        Self::rho_index(v.params(), v.index())
    }

    pub fn rho_index(params: LatticeParams, index: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(index, Rational::one());
        Self { params, coeffs }
    }

    pub fn from_terms(
        params: LatticeParams,
        terms: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Result<Self> {
        let mut e = Self::zero(params);
        for (i, q) in terms {
            if i >= params.order() {
                return Err(Error::Input(format!(
                    "group element index {i} out of range"
                )));
            }
            e.add_term(i, &q);
        }
        Ok(e)
    }

    pub fn params(&self) -> LatticeParams {
        self.params
    }

    pub fn coeff(&self, index: usize) -> Rational {
        self.coeffs
            .get(&index)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(i, q)| (*i, q))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_vec(&self) -> RatVec {
        self.coeffs.iter().map(|(i, q)| (*i, q.clone())).collect()
    }

    fn add_term(&mut self, index: usize, q: &Rational) {
        if q.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(index).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.params, other.params,
            "group ring elements over different lattices"
        );
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.params);
        }
        Self {
            params: self.params,
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, c * q)).collect(),
        }
    }

    /// Left multiplication by the group element `v`.
    pub fn translate(&self, v: &ZlVector) -> Self {
        let ar = IndexArith::new(self.params);
        let t = v.index();
        Self {
            params: self.params,
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, c)| (ar.add(*i, t), c.clone()))
                .collect(),
        }
    }

    /// The augmentation `epsilon`, the sum of coefficients.
    pub fn augmentation(&self) -> Rational {
        self.coeffs
            .values()
            .fold(Rational::zero(), |acc, q| acc + q)
    }

    /// Splits off the `theta` component, realising `Q[G] = Q theta + I(G)`.
    pub fn decompose(&self) -> Decomposition {
        let n = int(self.params.order() as i64);
        let theta_coeff = self.augmentation() / n;
        let ideal = self - &GroupRingElement::theta(self.params).scale(&theta_coeff);
        Decomposition { theta_coeff, ideal }
    }

    /// Writes `index numerator denominator` lines.
    pub fn write_triplets<W: Write>(&self, mut out: W) -> Result<()> {
        for (i, q) in &self.coeffs {
            writeln!(out, "{} {} {}", i, q.numer(), q.denom())?;
        }
        Ok(())
    }

    pub fn read_triplets<R: BufRead>(params: LatticeParams, input: R) -> Result<Self> {
        let mut terms = Vec::new();
        for line in input.lines() {
            let line = line?;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.is_empty() {
                continue;
            }
            let bad = || Error::Input(format!("bad group ring line {line:?}"));
            let [i, n, d] = parts[..] else {
                return Err(bad());
            };
            let i: usize = i.parse().map_err(|_| bad())?;
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            terms.push((i, Rational::new(n, d)));
        }
        Self::from_terms(params, terms)
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(i, q)| format!("{q}*rho[{}]", ZlVector::from_index(self.params, *i).label()))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;

    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.check(rhs);
        let mut out = self.clone();
        for (i, q) in &rhs.coeffs {
            out.add_term(*i, q);
        }
        out
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;

    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self + &(-rhs)
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;

    fn neg(self) -> GroupRingElement {
        GroupRingElement {
            params: self.params,
            coeffs: self.coeffs.iter().map(|(i, q)| (*i, -q)).collect(),
        }
    }
}

/// Convolution product.
impl Mul for &GroupRingElement {
    type Output = GroupRingElement;

    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.check(rhs);
        let ar = IndexArith::new(self.params);
        let mut out = GroupRingElement::zero(self.params);
        for (i, p) in &self.coeffs {
            for (j, q) in &rhs.coeffs {
                out.add_term(ar.add(*i, *j), &(p * q));
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for GroupRingElement {
            type Output = GroupRingElement;
            fn $m(self, rhs: GroupRingElement) -> GroupRingElement {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// `rho[v] - rho[v+w1] - rho[v+w2] + rho[v+w1+w2]` as index/coefficient pairs.
pub(crate) fn four_term(ar: &IndexArith, v: usize, w1: usize, w2: usize) -> [(usize, i64); 4] {
    let v1 = ar.add(v, w1);
    [(v, 1), (v1, -1), (ar.add(v, w2), -1), (ar.add(v1, w2), 1)]
}

fn from_int_terms(
    params: LatticeParams,
    terms: impl IntoIterator<Item = (usize, i64)>,
) -> GroupRingElement {
    let mut e = GroupRingElement::zero(params);
    for (i, c) in terms {
        e.add_term(i, &int(c));
    }
    e
}

/// `psi(X(v, w1, w2))`; requires `{w1, w2}` isotropic and unimodular.
pub fn psi_image(v: &ZlVector, w1: &ZlVector, w2: &ZlVector) -> Result<GroupRingElement> {
    let pair = [w1.clone(), w2.clone()];
    if w1 == w2 || !is_isotropic(&pair)? || !is_unimodular(&pair)? {
        return Err(Error::Precondition(format!(
            "{{{}, {}}} is not an isotropic unimodular pair",
            w1.label(),
            w2.label()
        )));
    }
    Ok(psi_image_unchecked(v, w1, w2))
}

/// The four-term formula without validating the pair.
pub fn psi_image_unchecked(v: &ZlVector, w1: &ZlVector, w2: &ZlVector) -> GroupRingElement {
    let ar = IndexArith::new(v.params());
    from_int_terms(
        v.params(),
        four_term(&ar, v.index(), w1.index(), w2.index()),
    )
}

/// Boundary value of a `T_2` class: `rho[f] - rho[f+y] - rho[f+z] + rho[f+y+z]`.
pub fn boundary_t2(f: &ZlVector, y: &ZlVector, z: &ZlVector) -> GroupRingElement {
    psi_image_unchecked(f, y, z)
}

/// Boundary value of a `T_3` class: `sum_k (rho[f+kx+y] - rho[f+kx+y+z])`.
pub fn boundary_t3(f: &ZlVector, x: &ZlVector, y: &ZlVector, z: &ZlVector) -> GroupRingElement {
    let params = f.params();
    let ar = IndexArith::new(params);
    let mut terms = Vec::new();
    for k in 0..params.level() as i64 {
        let base = ar.add(ar.add(f.index(), ar.scale(x.index(), k)), y.index());
        terms.push((base, 1));
        terms.push((ar.add(base, z.index()), -1));
    }
    from_int_terms(params, terms)
}

/// `sum_{k<L} boundary_t2(f + k y, y, z) == 0`.
pub fn verify_case3_cancellation(f: &ZlVector, y: &ZlVector, z: &ZlVector) -> bool {
    let mut acc = GroupRingElement::zero(f.params());
    for k in 0..f.params().level() as i64 {
        acc = &acc + &boundary_t2(&(f + &y.scale(k)), y, z);
    }
    acc.is_zero()
}

/// `sum_{k<L} boundary_t3(f + k z, x, y, z) == 0`.
pub fn verify_case4_telescoping(f: &ZlVector, x: &ZlVector, y: &ZlVector, z: &ZlVector) -> bool {
    let mut acc = GroupRingElement::zero(f.params());
    for k in 0..f.params().level() as i64 {
        acc = &acc + &boundary_t3(&(f + &z.scale(k)), x, y, z);
    }
    acc.is_zero()
}
