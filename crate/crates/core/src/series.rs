//! Truncated formal series in `z = 1/λ` with polynomial coefficients.
//!
//! A [`TruncSeries`] stores coefficients from `z^low` upward and a validity
//! order: coefficients are exact for powers `≤ order`, unknown beyond. An
//! order of `None` means the series is an exact finite sum. Every operation
//! propagates the order pessimistically, so re-running at a higher order only
//! ever appends coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Poly, Variable};
use crate::scalar::Scalar;

/// Validity order; `None` is "exact".
pub type Order = Option<i64>;

fn min_order(a: Order, b: Order) -> Order {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn shift_order(a: Order, by: i64) -> Order {
    a.map(|x| x + by)
}

#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries<S> {
    low: i64,
    coeffs: Vec<Poly<S>>,
    order: Order,
}

impl<S: Scalar> TruncSeries<S> {
    /// Build from coefficients of `z^low, z^(low+1), …`, dropping anything
    /// beyond `order`.
    pub fn new(low: i64, coeffs: Vec<Poly<S>>, order: Order) -> Self {
        let mut s = TruncSeries { low, coeffs, order };
        s.normalize();
        s
    }

    pub fn zero(order: Order) -> Self {
        Self::new(0, Vec::new(), order)
    }

    /// The exact series `c`.
    pub fn constant(c: Poly<S>) -> Self {
        Self::new(0, vec![c], None)
    }

    /// The exact series `c · z^power`.
    pub fn monomial(c: Poly<S>, power: i64) -> Self {
        Self::new(power, vec![c], None)
    }

    /// Series with coefficients `f(n)` for `n` in `from..=order`.
    pub fn from_fn(from: i64, order: i64, f: impl FnMut(i64) -> Poly<S>) -> Self {
        Self::new(from, (from..=order).map(f).collect(), Some(order))
    }

    fn normalize(&mut self) {
        if let Some(n) = self.order {
            let keep = (n - self.low + 1).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(Poly::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// Lowest power with a (possibly) nonzero coefficient.
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest power with a stored nonzero coefficient.
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_none()
    }

    /// Is every coefficient up to the validity order zero?
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^k` without a validity check (zero where unstored).
    fn get(&self, k: i64) -> Poly<S> {
        if k < self.low {
            return Poly::zero();
        }
        self.coeffs
            .get((k - self.low) as usize)
            .cloned()
            .unwrap_or_else(Poly::zero)
    }

    fn get_ref(&self, k: i64) -> Option<&Poly<S>> {
        if k < self.low {
            return None;
        }
        self.coeffs.get((k - self.low) as usize)
    }

    /// Coefficient of `z^k`; fails beyond the validity order.
    pub fn coeff(&self, k: i64) -> Result<Poly<S>> {
        match self.order {
            Some(n) if k > n => Err(Error::OutOfValidity { index: k, order: n }),
            _ => Ok(self.get(k)),
        }
    }

    /// Forget coefficients beyond `order`.
    pub fn truncate(&self, order: i64) -> Self {
        Self::new(self.low, self.coeffs.clone(), min_order(self.order, Some(order)))
    }

    /// Multiply by `z^n`.
    pub fn shift(&self, n: i64) -> Self {
        Self::new(self.low + n, self.coeffs.clone(), shift_order(self.order, n))
    }

    pub fn map<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&Poly<S>) -> Result<Poly<S>>,
    {
        let coeffs = self.coeffs.iter().map(&mut f).collect::<Result<_>>()?;
        Ok(Self::new(self.low, coeffs, self.order))
    }

    pub fn scale(&self, c: &Poly<S>) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|x| x * c).collect(), self.order)
    }

    pub fn scale_scalar(&self, c: &S) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|x| x.scale(c)).collect(), self.order)
    }

    pub fn neg(&self) -> Self {
        self.scale_scalar(&(-S::one()))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let order = min_order(self.order, other.order);
        if self.is_zero() && other.is_zero() {
            return Self::zero(order);
        }
        let low = match (self.is_zero(), other.is_zero()) {
            (true, _) => other.low,
            (_, true) => self.low,
            _ => self.low.min(other.low),
        };
        let mut high = self.high().max(other.high());
        if let Some(n) = order {
            high = high.min(n);
        }
        let coeffs = (low..=high)
            .map(|k| {
                let mut c = self.get(k);
                match other.get_ref(k) {
                    Some(o) if subtract => c -= o,
                    Some(o) => c += o,
                    None => {}
                }
                c
            })
            .collect();
        Self::new(low, coeffs, order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = min_order(
            shift_order(self.order, other.low),
            shift_order(other.order, self.low),
        );
        if self.is_zero() || other.is_zero() {
            return Self::zero(order);
        }
        let low = self.low + other.low;
        let mut high = self.high() + other.high();
        if let Some(n) = order {
            high = high.min(n);
        }
        let coeffs = (low..=high)
            .map(|k| {
                let mut c = Poly::zero();
                for (a, x) in self.coeffs.iter().enumerate() {
                    let ka = self.low + a as i64;
                    if let Some(y) = other.get_ref(k - ka) {
                        if !x.is_zero() && !y.is_zero() {
                            c += &(x * y);
                        }
                    }
                }
                c
            })
            .collect();
        Self::new(low, coeffs, order)
    }

    /// The scalar constant term, if the series has no negative powers and
    /// its `z^0` coefficient is a nonzero constant.
    fn unit_constant(&self, what: &str) -> Result<S> {
        if self.low < 0 {
            return Err(Error::NotInvertible(format!("{what}: negative powers of z")));
        }
        self.get(0)
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::NotInvertible(format!("{what}: constant term is not a nonzero scalar")))
    }

    fn require_order(&self, what: &str) -> Result<i64> {
        self.order
            .ok_or_else(|| Error::Precondition(format!("{what} of an exact series needs a truncation order")))
    }

    /// Multiplicative inverse up to the validity order.
    pub fn invert(&self) -> Result<Self> {
        let n = self.require_order("inverse")?;
        let c0 = self.unit_constant("inverse")?;
        let inv0 = c0.checked_inv().ok_or(Error::DivisionByZero)?;
        let mut r: Vec<Poly<S>> = Vec::with_capacity(n.max(0) as usize + 1);
        r.push(Poly::constant(inv0.clone()));
        for k in 1..=n {
            let mut acc = Poly::zero();
            for m in 1..=k {
                if let Some(sm) = self.get_ref(m) {
                    acc += &(sm * &r[(k - m) as usize]);
                }
            }
            r.push(acc.scale(&(-inv0.clone())));
        }
        Ok(Self::new(0, r, Some(n)))
    }

    /// Square root with prescribed constant term `root0`.
    pub fn sqrt(&self, root0: &S) -> Result<Self> {
        let n = self.require_order("square root")?;
        let c0 = self.unit_constant("square root")?;
        let mut sq = root0.clone();
        sq *= root0;
        if sq != c0 {
            return Err(Error::BadSquareRoot(format!("({root0})^2 != {c0}")));
        }
        let mut two_root = root0.clone();
        two_root += root0;
        let half_inv = two_root.checked_inv().ok_or(Error::DivisionByZero)?;
        let mut r: Vec<Poly<S>> = Vec::with_capacity(n.max(0) as usize + 1);
        r.push(Poly::constant(root0.clone()));
        for k in 1..=n {
            let mut acc = self.get(k);
            for m in 1..k {
                acc -= &(&r[m as usize] * &r[(k - m) as usize]);
            }
            r.push(acc.scale(&half_inv));
        }
        Ok(Self::new(0, r, Some(n)))
    }

    /// Polynomial part in λ of `λ^k · s`: the coefficients of `z^n` for
    /// `n ≤ k`, moved to `z^(n-k)`. The result is exact.
    pub fn plus_projection(&self, k: i64) -> Result<Self> {
        if let Some(n) = self.order {
            if k > n {
                return Err(Error::OutOfValidity { index: k, order: n });
            }
        }
        let coeffs = (self.low.min(0)..=k).map(|n| self.get(n)).collect();
        Ok(Self::new(self.low.min(0) - k, coeffs, None))
    }

    /// Rewrite an exact series with no positive powers of `z` as a
    /// polynomial in `var = 1/z`.
    pub fn to_poly_in(&self, var: &Variable) -> Result<Poly<S>> {
        if !self.is_exact() || (!self.is_zero() && self.high() > 0) {
            return Err(Error::Precondition(
                "only exact series without positive powers of z are polynomials in λ".into(),
            ));
        }
        let x = Poly::var(var.clone());
        let mut out = Poly::zero();
        for k in self.low..=0 {
            if let Some(c) = self.get_ref(k) {
                out += &(c * &x.pow((-k) as u32));
            }
        }
        Ok(out)
    }
}

impl<S: Scalar> fmt::Display for TruncSeries<S> {
    /// `(c) * z^k` terms joined by ` + `, then `O(z^(N+1))` if truncated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c}) * z^{}", self.low + a as i64)?;
        }
        match self.order {
            Some(n) if first => write!(f, "O(z^{})", n + 1),
            Some(n) => write!(f, " + O(z^{})", n + 1),
            None if first => f.write_str("0"),
            None => Ok(()),
        }
    }
}

impl<S: Scalar> fmt::Debug for TruncSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries[{self}]")
    }
}

/// A 2×2 matrix of polynomials.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat2<S>(pub [[Poly<S>; 2]; 2]);

impl<S: Scalar> Mat2<S> {
    pub fn zero() -> Self {
        Mat2(Default::default())
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> Poly<S>) -> Self {
        Mat2([[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]])
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<S> {
        &self.0[i][j]
    }

    pub fn map(&self, mut f: impl FnMut(&Poly<S>) -> Poly<S>) -> Self {
        Self::from_fn(|i, j| f(&self.0[i][j]))
    }

    pub fn try_map(&self, mut f: impl FnMut(&Poly<S>) -> Result<Poly<S>>) -> Result<Self> {
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = f(&self.0[i][j])?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| &self.0[i][j] + &o.0[i][j])
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| &self.0[i][j] - &o.0[i][j])
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| &(&self.0[i][0] * &o.0[0][j]) + &(&self.0[i][1] * &o.0[1][j]))
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> Poly<S> {
        &self.0[0][0] + &self.0[1][1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(Poly::is_zero)
    }

    /// First nonzero entry, for failure witnesses.
    pub fn first_nonzero(&self) -> Option<String> {
        for i in 0..2 {
            for j in 0..2 {
                if !self.0[i][j].is_zero() {
                    return Some(format!("[{}{}] {}", i + 1, j + 1, self.0[i][j]));
                }
            }
        }
        None
    }
}

impl<S: Scalar> fmt::Debug for Mat2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]
        )
    }
}

/// A 2×2 matrix of truncated series.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixSeries<S> {
    pub entries: [[TruncSeries<S>; 2]; 2],
}

impl<S: Scalar> MatrixSeries<S> {
    pub fn new(entries: [[TruncSeries<S>; 2]; 2]) -> Self {
        MatrixSeries { entries }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> TruncSeries<S>) -> Self {
        Self::new([[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]])
    }

    pub fn try_from_fn(mut f: impl FnMut(usize, usize) -> Result<TruncSeries<S>>) -> Result<Self> {
        Ok(Self::new([[f(0, 0)?, f(0, 1)?], [f(1, 0)?, f(1, 1)?]]))
    }

    pub fn entry(&self, i: usize, j: usize) -> &TruncSeries<S> {
        &self.entries[i][j]
    }

    pub fn order(&self) -> Order {
        self.entries
            .iter()
            .flatten()
            .fold(None, |acc, s| min_order(acc, s.order()))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].add(&o.entries[i][j]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].sub(&o.entries[i][j]))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| {
            self.entries[i][0]
                .mul(&o.entries[0][j])
                .add(&self.entries[i][1].mul(&o.entries[1][j]))
        })
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn scale_scalar(&self, c: &S) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].scale_scalar(c))
    }

    pub fn trace(&self) -> TruncSeries<S> {
        self.entries[0][0].add(&self.entries[1][1])
    }

    pub fn det(&self) -> TruncSeries<S> {
        self.entries[0][0]
            .mul(&self.entries[1][1])
            .sub(&self.entries[0][1].mul(&self.entries[1][0]))
    }

    /// Inverse through the adjugate and an inverted determinant.
    pub fn inverse(&self) -> Result<Self> {
        let dinv = self.det().invert()?;
        let [[a, b], [c, d]] = &self.entries;
        Ok(Self::new([
            [d.mul(&dinv), b.neg().mul(&dinv)],
            [c.neg().mul(&dinv), a.mul(&dinv)],
        ]))
    }

    pub fn map(&self, mut f: impl FnMut(&TruncSeries<S>) -> Result<TruncSeries<S>>) -> Result<Self> {
        Self::try_from_fn(|i, j| f(&self.entries[i][j]))
    }

    pub fn plus_projection(&self, k: i64) -> Result<Self> {
        self.map(|s| s.plus_projection(k))
    }

    pub fn truncate(&self, order: i64) -> Self {
        Self::from_fn(|i, j| self.entries[i][j].truncate(order))
    }

    /// The matrix coefficient of `z^k`.
    pub fn coeff(&self, k: i64) -> Result<Mat2<S>> {
        let mut m = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = self.entries[i][j].coeff(k)?;
            }
        }
        Ok(m)
    }

    /// Exact polynomial-in-λ matrix as a [`Mat2`] in `var`.
    pub fn to_poly_in(&self, var: &Variable) -> Result<Mat2<S>> {
        let mut m = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = self.entries[i][j].to_poly_in(var)?;
            }
        }
        Ok(m)
    }

    /// Is every entry zero up to its validity order?
    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(TruncSeries::is_zero)
    }
}

impl<S: Scalar> fmt::Debug for MatrixSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixSeries").field("entries", &self.entries).finish()
    }
}

/// Bivariate coefficients `c_(i,j)` of `Σ c_(i,j) z₁^(i+1) z₂^(j+1)`, known
/// for `i ≤ n1`, `j ≤ n2`.
#[derive(Clone, PartialEq, Eq)]
pub struct BiSeries<S> {
    coeffs: std::collections::BTreeMap<(u32, u32), Poly<S>>,
    orders: (u32, u32),
}

impl<S: Scalar> BiSeries<S> {
    pub fn from_fn(
        n1: u32,
        n2: u32,
        mut f: impl FnMut(u32, u32) -> Result<Poly<S>>,
    ) -> Result<Self> {
        let mut coeffs = std::collections::BTreeMap::new();
        for i in 0..=n1 {
            for j in 0..=n2 {
                let c = f(i, j)?;
                if !c.is_zero() {
                    coeffs.insert((i, j), c);
                }
            }
        }
        Ok(BiSeries { coeffs, orders: (n1, n2) })
    }

    pub fn orders(&self) -> (u32, u32) {
        self.orders
    }

    pub fn coeff(&self, index: (u32, u32)) -> Result<Poly<S>> {
        let (n1, n2) = self.orders;
        if index.0 > n1 {
            return Err(Error::OutOfValidity { index: index.0 as i64, order: n1 as i64 });
        }
        if index.1 > n2 {
            return Err(Error::OutOfValidity { index: index.1 as i64, order: n2 as i64 });
        }
        Ok(self.coeffs.get(&index).cloned().unwrap_or_else(Poly::zero))
    }
}

impl<S: Scalar> fmt::Debug for BiSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BiSeries")
            .field("coeffs", &self.coeffs)
            .field("orders", &self.orders)
            .finish()
    }
}
