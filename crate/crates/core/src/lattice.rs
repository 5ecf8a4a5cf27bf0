//! The symplectic lattice `H_L = (Z/L)^{2g}`.
//!
//! Coordinates are ordered `(a_1, b_1, ..., a_g, b_g)` and the intersection
//! pairing is normalised so that `i(a_j, b_j) = +1`. Vectors are indexed in
//! mixed radix with `a_1` least significant, which fixes every matrix column
//! ordering downstream.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of vectors any enumeration may produce.
pub const DEFAULT_VECTOR_CAP: usize = 1 << 22;

/// Genus and level of the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeParams {
    genus: usize,
    level: u64,
    order: usize,
}

impl LatticeParams {
    pub fn new(genus: usize, level: u64) -> Result<Self> {
        if genus < 1 {
            return Err(Error::Params(format!(
                "genus must be at least 1, got {genus}"
            )));
        }
        if level < 2 {
            return Err(Error::Params(format!(
                "level must be at least 2, got {level}"
            )));
        }
        let exp = u32::try_from(2 * genus)
            .map_err(|_| Error::Params(format!("genus {genus} is too large")))?;
        let order = level
            .checked_pow(exp)
            .and_then(|n| usize::try_from(n).ok())
            .filter(|&n| n < u32::MAX as usize)
            .ok_or_else(|| {
                Error::Params(format!(
                    "|H_L| = {level}^{} does not fit the index type",
                    2 * genus
                ))
            })?;
        Ok(Self {
            genus,
            level,
            order,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// Rank `2g` of the lattice.
    pub fn rank(&self) -> usize {
        2 * self.genus
    }

    /// `|H_L| = L^{2g}`.
    pub fn order(&self) -> usize {
        self.order
    }

    fn check_same(&self, other: &LatticeParams) -> Result<()> {
        if self != other {
            return Err(Error::Params(format!(
                "vectors from different lattices: (g={}, L={}) vs (g={}, L={})",
                self.genus, self.level, other.genus, other.level
            )));
        }
        Ok(())
    }
}

impl fmt::Display for LatticeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={} L={}", self.genus, self.level)
    }
}

/// An element of `H_L` with reduced coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZlVector {
    params: LatticeParams,
    coords: Vec<u64>,
}

impl ZlVector {
    pub fn zero(params: LatticeParams) -> Self {
        Self {
            params,
            coords: vec![0; params.rank()],
        }
    }

    /// Builds a vector from integer coordinates, reducing each one mod `L`.
    pub fn from_coords(params: LatticeParams, coords: &[i64]) -> Result<Self> {
        if coords.len() != params.rank() {
            return Err(Error::Input(format!(
                "expected {} coordinates, got {}",
                params.rank(),
                coords.len()
            )));
        }
        let l = params.level as i64;
        Ok(Self {
            params,
            coords: coords.iter().map(|&c| c.rem_euclid(l) as u64).collect(),
        })
    }

    /// The basis vector at coordinate position `k` (`a_{k/2+1}` for even `k`, `b_{k/2+1}` for odd).
    pub fn basis(params: LatticeParams, k: usize) -> Self {
        let mut v = Self::zero(params);
        v.coords[k] = 1;
        v
    }

    /// `a_{i+1}` (zero-based handle).
    pub fn a(params: LatticeParams, i: usize) -> Self {
        Self::basis(params, 2 * i)
    }

    /// `b_{i+1}` (zero-based handle).
    pub fn b(params: LatticeParams, i: usize) -> Self {
        Self::basis(params, 2 * i + 1)
    }

    pub fn from_index(params: LatticeParams, mut index: usize) -> Self {
        debug_assert!(index < params.order);
        let l = params.level as usize;
        let coords = (0..params.rank())
            .map(|_| {
                let c = index % l;
                index /= l;
                c as u64
            })
            .collect();
        Self { params, coords }
    }

    /// Mixed-radix index `sum coords[i] * L^i`.
    pub fn index(&self) -> usize {
        let l = self.params.level as usize;
        self.coords
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * l + c as usize)
    }

    pub fn params(&self) -> LatticeParams {
        self.params
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        let l = self.params.level as i128;
        let k = (k as i128).rem_euclid(l);
        Self {
            params: self.params,
            coords: self
                .coords
                .iter()
                .map(|&c| ((c as i128 * k) % l) as u64)
                .collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.params.check_same(&other.params)?;
        Ok(self.add_unchecked(other))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let l = self.params.level;
        Self {
            params: self.params,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&x, &y)| (x + y) % l)
                .collect(),
        }
    }

    /// The pairing `sum_j (x_{a_j} y_{b_j} - x_{b_j} y_{a_j}) mod L`.
    pub fn pairing(&self, other: &Self) -> Result<u64> {
        self.params.check_same(&other.params)?;
        Ok(self.pairing_unchecked(other))
    }

    fn pairing_unchecked(&self, other: &Self) -> u64 {
        let l = self.params.level as i128;
        let mut acc: i128 = 0;
        for j in 0..self.params.genus {
            let (xa, xb) = (self.coords[2 * j] as i128, self.coords[2 * j + 1] as i128);
            let (ya, yb) = (other.coords[2 * j] as i128, other.coords[2 * j + 1] as i128);
            acc += xa * yb - xb * ya;
        }
        acc.rem_euclid(l) as u64
    }

    /// `gcd(coords, L)`; the zero vector has content `L`.
    pub fn content(&self) -> u64 {
        self.coords
            .iter()
            .fold(self.params.level, |g, &c| g.gcd(&c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// Compact label such as `a1+2b2`, or `0`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        for (k, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = if k % 2 == 0 { 'a' } else { 'b' };
            if c == 1 {
                parts.push(format!("{name}{}", k / 2 + 1));
            } else {
                parts.push(format!("{c}{name}{}", k / 2 + 1));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }
}

impl fmt::Debug for ZlVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZlVector({})", self.label())
    }
}

impl fmt::Display for ZlVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl PartialOrd for ZlVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ZlVector {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.params.genus, self.params.level, self.index()).cmp(&(
            other.params.genus,
            other.params.level,
            other.index(),
        ))
    }
}

// Operators panic on mismatched lattices; use `checked_add` or `pairing` for fallible variants.
impl std::ops::Add for &ZlVector {
    type Output = ZlVector;
    fn add(self, rhs: &ZlVector) -> ZlVector {
        assert_eq!(
            self.params, rhs.params,
            "adding vectors from different lattices"
        );
        self.add_unchecked(rhs)
    }
}

impl std::ops::Add for ZlVector {
    type Output = ZlVector;
    fn add(self, rhs: ZlVector) -> ZlVector {
        &self + &rhs
    }
}

impl std::ops::Neg for &ZlVector {
    type Output = ZlVector;
    fn neg(self) -> ZlVector {
        self.scale(-1)
    }
}

impl std::ops::Neg for ZlVector {
    type Output = ZlVector;
    fn neg(self) -> ZlVector {
        self.scale(-1)
    }
}

impl std::ops::Sub for &ZlVector {
    type Output = ZlVector;
    fn sub(self, rhs: &ZlVector) -> ZlVector {
        self + &(-rhs)
    }
}

impl std::ops::Sub for ZlVector {
    type Output = ZlVector;
    fn sub(self, rhs: ZlVector) -> ZlVector {
        &self - &rhs
    }
}

/// Group operations performed directly on mixed-radix indices, for hot loops.
#[derive(Clone, Debug)]
pub struct IndexArith {
    params: LatticeParams,
    level: usize,
    pow: Vec<usize>,
}

impl IndexArith {
    pub fn new(params: LatticeParams) -> Self {
        let level = params.level as usize;
        let pow = (0..params.rank()).map(|k| level.pow(k as u32)).collect();
        Self { params, level, pow }
    }

    pub fn params(&self) -> LatticeParams {
        self.params
    }

    pub fn order(&self) -> usize {
        self.params.order
    }

    /// Index of the `k`-th basis vector in the order `(a_1, b_1, ...)`.
    pub fn basis(&self, k: usize) -> usize {
        self.pow[k]
    }

    pub fn digit(&self, i: usize, k: usize) -> usize {
        i / self.pow[k] % self.level
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let mut out = 0;
        for (k, p) in self.pow.iter().enumerate() {
            out += (self.digit(i, k) + self.digit(j, k)) % self.level * p;
        }
        out
    }

    pub fn neg(&self, i: usize) -> usize {
        let mut out = 0;
        for (k, p) in self.pow.iter().enumerate() {
            out += (self.level - self.digit(i, k)) % self.level * p;
        }
        out
    }

    pub fn sub(&self, i: usize, j: usize) -> usize {
        self.add(i, self.neg(j))
    }

    pub fn scale(&self, i: usize, k: i64) -> usize {
        let k = k.rem_euclid(self.level as i64) as usize;
        let mut out = 0;
        for (d, p) in self.pow.iter().enumerate() {
            out += self.digit(i, d) * k % self.level * p;
        }
        out
    }

    pub fn pairing(&self, i: usize, j: usize) -> u64 {
        let l = self.level as i64;
        let mut acc = 0i64;
        for t in 0..self.params.genus {
            let (xa, xb) = (self.digit(i, 2 * t) as i64, self.digit(i, 2 * t + 1) as i64);
            let (ya, yb) = (self.digit(j, 2 * t) as i64, self.digit(j, 2 * t + 1) as i64);
            acc = (acc + xa * yb - xb * ya).rem_euclid(l);
        }
        acc as u64
    }

    pub fn vector(&self, i: usize) -> ZlVector {
        ZlVector::from_index(self.params, i)
    }
}

pub fn pairing(x: &ZlVector, y: &ZlVector) -> Result<u64> {
    x.pairing(y)
}

pub fn content(v: &ZlVector) -> u64 {
    v.content()
}

fn check_common_params(set: &[ZlVector]) -> Result<()> {
    if let Some(first) = set.first() {
        for v in &set[1..] {
            first.params.check_same(&v.params)?;
        }
    }
    Ok(())
}

/// All pairwise pairings vanish. The empty set is isotropic.
pub fn is_isotropic(set: &[ZlVector]) -> Result<bool> {
    check_common_params(set)?;
    for (i, x) in set.iter().enumerate() {
        for y in &set[i + 1..] {
            if x.pairing_unchecked(y) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `set` spans a free rank-`k` direct summand of `(Z/L)^{2g}`.
///
/// Decided by the gcd of all `k x k` minors of the lifted coordinate matrix together
/// with `L`: the set is unimodular iff that gcd is 1.
pub fn is_unimodular(set: &[ZlVector]) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::Input("unimodularity of an empty set".into()));
    }
    check_common_params(set)?;
    for (i, x) in set.iter().enumerate() {
        if set[i + 1..].contains(x) {
            return Err(Error::Input(format!(
                "repeated vector {x} in unimodularity test"
            )));
        }
    }
    let params = set[0].params;
    let k = set.len();
    let n = params.rank();
    if k > n {
        return Ok(false);
    }
    let level = params.level as i128;
    let mut g = level;
    let mut cols: Vec<usize> = (0..k).collect();
    loop {
        let minor: Vec<Vec<i128>> = set
            .iter()
            .map(|v| cols.iter().map(|&c| v.coords[c] as i128).collect())
            .collect();
        let det = determinant_mod(minor, level);
        g = g.gcd(&det);
        if g == 1 {
            return Ok(true);
        }
        if !next_combination(&mut cols, n) {
            break;
        }
    }
    Ok(false)
}

/// Advances `comb` to the next k-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Determinant reduced mod `modulus` (only its gcd with `L` is used). Bareiss in `i128`,
/// falling back to big integers on overflow.
fn determinant_mod(m: Vec<Vec<i128>>, modulus: i128) -> i128 {
    match bareiss_i128(m.clone()) {
        Some(d) => d.rem_euclid(modulus),
        None => {
            let big: Vec<Vec<BigInt>> = m
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let d = bareiss_big(big).mod_floor(&BigInt::from(modulus));
            i128::try_from(d).expect("reduced below modulus")
        }
    }
}

fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j]
                    .checked_mul(m[k][k])?
                    .checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = num / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m.get(n.wrapping_sub(1)).map_or(1, |r| r[n - 1]))
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::from(1);
    }
    sign * &m[n - 1][n - 1]
}

fn check_cap(what: &str, needed: usize, cap: usize) -> Result<()> {
    if needed > cap {
        return Err(Error::budget(what, needed as u128, cap as u128));
    }
    Ok(())
}

/// Every vector of `H_L`, in index order.
pub fn enumerate_vectors(params: LatticeParams, cap: usize) -> Result<Vec<ZlVector>> {
    check_cap("vector enumeration", params.order(), cap)?;
    Ok((0..params.order())
        .map(|i| ZlVector::from_index(params, i))
        .collect())
}

/// All ordered pairs `(w1, w2)` of distinct vectors forming an isotropic unimodular set.
pub fn enumerate_iso_uni_pairs(
    params: LatticeParams,
    cap: usize,
) -> Result<Vec<(ZlVector, ZlVector)>> {
    let n = params.order();
    check_cap(
        "pair enumeration",
        n.saturating_mul(n),
        cap.saturating_mul(cap.max(1)),
    )?;
    let vectors = enumerate_vectors(params, cap)?;
    let primitive: Vec<&ZlVector> = vectors.iter().filter(|v| v.is_primitive()).collect();
    let mut out = Vec::new();
    for w1 in &primitive {
        for w2 in &primitive {
            if w1 == w2 || w1.pairing_unchecked(w2) != 0 {
                continue;
            }
            if is_unimodular(&[(*w1).clone(), (*w2).clone()])? {
                out.push(((*w1).clone(), (*w2).clone()));
            }
        }
    }
    Ok(out)
}

/// A symplectic transvection `x -> x + sign * i(x, d) * d` along a primitive direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransvectionGenerator {
    direction: ZlVector,
    sign: i64,
}

impl TransvectionGenerator {
    pub fn new(direction: ZlVector, sign: i64) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::Input(format!(
                "transvection sign must be +1 or -1, got {sign}"
            )));
        }
        if !direction.is_primitive() {
            return Err(Error::Input(format!(
                "transvection direction {direction} is not primitive"
            )));
        }
        Ok(Self { direction, sign })
    }

    pub fn direction(&self) -> &ZlVector {
        &self.direction
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn apply(&self, x: &ZlVector) -> Result<ZlVector> {
        let t = x.pairing(&self.direction)? as i64;
        Ok(x + &self.direction.scale(self.sign * t))
    }

    /// Every transvection generator with a primitive direction, both signs.
    pub fn all(params: LatticeParams, cap: usize) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for d in enumerate_vectors(params, cap)? {
            if d.is_primitive() {
                out.push(Self {
                    direction: d.clone(),
                    sign: 1,
                });
                out.push(Self {
                    direction: d,
                    sign: -1,
                });
            }
        }
        Ok(out)
    }
}

/// Orbit label of every vector (by index) under the group generated by transvections.
///
/// Labels are assigned in order of first discovery, so the vector at index 0 gets label 0.
pub fn sp_orbit_labels(params: LatticeParams, cap: usize) -> Result<Vec<usize>> {
    let n = params.order();
    let generators = TransvectionGenerator::all(params, cap)?;
    check_cap(
        "orbit search",
        n.saturating_mul(generators.len()),
        cap.saturating_mul(64),
    )?;
    let vectors = enumerate_vectors(params, cap)?;
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let x = &vectors[i];
            for t in &generators {
                let j = t.apply(x)?.index();
                if label[j] == usize::MAX {
                    label[j] = next;
                    queue.push_back(j);
                }
            }
        }
        next += 1;
    }
    Ok(label)
}

/// Number of `Sp_{2g}(Z/L)`-orbits on `H_L`, found by breadth-first closure under transvections.
pub fn sp_orbit_count_bfs(params: LatticeParams, cap: usize) -> Result<usize> {
    let labels = sp_orbit_labels(params, cap)?;
    Ok(labels.iter().copied().max().map_or(0, |m| m + 1))
}

/// Number of positive divisors of `n`.
pub fn tau(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut count = 1;
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        count *= e + 1;
        p += 1;
    }
    if rest > 1 {
        count *= 2;
    }
    count
}
