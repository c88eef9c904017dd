//! Sparse multivariate polynomials over a [`Scalar`] field.
//!
//! The variable universe is open: phase coordinates `e_j`, `f_j`, the
//! `q`, `r` fields, time jets of any of these, and the spectral parameters.
//! Polynomials are stored as a map from monomials to nonzero coefficients in
//! a fixed graded order, so structural equality is mathematical equality.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Kinds of variables, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    E,
    F,
    Q,
    R,
    /// Spectral parameters λ, μ, ν (indices 1, 2, 3).
    Spectral,
}

/// Finitely supported multi-index over time labels: `(time, count)` pairs,
/// sorted by time, counts positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Jet(Vec<(u32, u32)>);

impl Jet {
    pub fn new(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut jet = Jet::default();
        for (t, c) in pairs {
            for _ in 0..c {
                jet = jet.raised(t);
            }
        }
        jet
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn order(&self) -> u32 {
        self.0.iter().map(|&(_, c)| c).sum()
    }

    pub fn count(&self, time: u32) -> u32 {
        self.0
            .iter()
            .find(|&&(t, _)| t == time)
            .map_or(0, |&(_, c)| c)
    }

    /// The jet with one more derivative in `time`.
    pub fn raised(&self, time: u32) -> Jet {
        let mut v = self.0.clone();
        match v.binary_search_by_key(&time, |&(t, _)| t) {
            Ok(pos) => v[pos].1 += 1,
            Err(pos) => v.insert(pos, (time, 1)),
        }
        Jet(v)
    }

    /// The jet with one derivative in `time` removed, if there is one.
    pub fn lowered(&self, time: u32) -> Option<Jet> {
        let mut v = self.0.clone();
        let pos = v.binary_search_by_key(&time, |&(t, _)| t).ok()?;
        v[pos].1 -= 1;
        if v[pos].1 == 0 {
            v.remove(pos);
        }
        Some(Jet(v))
    }

    /// Some time this jet differentiates in, if any (the largest one).
    pub fn last_time(&self) -> Option<u32> {
        self.0.last().map(|&(t, _)| t)
    }

    fn only_time(&self, time: u32) -> bool {
        self.0.iter().all(|&(t, _)| t == time)
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (t, c)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}:{c}")?;
        }
        f.write_str("}")
    }
}

/// A polynomial variable: field kind, index (for `e_j`, `f_j` and the
/// spectral parameters, 0 otherwise) and time jet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub kind: Kind,
    pub index: u32,
    pub jet: Jet,
}

impl Variable {
    pub fn e(j: u32) -> Self {
        Variable { kind: Kind::E, index: j, jet: Jet::default() }
    }

    pub fn f(j: u32) -> Self {
        Variable { kind: Kind::F, index: j, jet: Jet::default() }
    }

    pub fn q() -> Self {
        Variable { kind: Kind::Q, index: 0, jet: Jet::default() }
    }

    pub fn r() -> Self {
        Variable { kind: Kind::R, index: 0, jet: Jet::default() }
    }

    /// The spectral parameter λ, μ or ν for `n` = 1, 2, 3.
    pub fn spectral(n: u32) -> Self {
        Variable { kind: Kind::Spectral, index: n, jet: Jet::default() }
    }

    pub fn lambda() -> Self {
        Self::spectral(1)
    }

    pub fn mu() -> Self {
        Self::spectral(2)
    }

    pub fn nu() -> Self {
        Self::spectral(3)
    }

    /// `q` or `r` differentiated `n` times in `x¹`.
    pub fn q_x(n: u32) -> Self {
        Self::q().with_jet(Jet::new([(1, n)]))
    }

    pub fn r_x(n: u32) -> Self {
        Self::r().with_jet(Jet::new([(1, n)]))
    }

    pub fn with_jet(mut self, jet: Jet) -> Self {
        self.jet = jet;
        self
    }

    /// The same field differentiated once more in `time`.
    pub fn raised(&self, time: u32) -> Self {
        Variable { kind: self.kind, index: self.index, jet: self.jet.raised(time) }
    }

    /// The underlying field with the jet stripped.
    pub fn base(&self) -> Self {
        Variable { kind: self.kind, index: self.index, jet: Jet::default() }
    }

    pub fn is_phase(&self) -> bool {
        matches!(self.kind, Kind::E | Kind::F) && self.jet.is_empty()
    }

    pub fn is_field(&self) -> bool {
        self.kind != Kind::Spectral
    }

    pub fn is_jet(&self) -> bool {
        !self.jet.is_empty()
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::E => write!(f, "e{}", self.index)?,
            Kind::F => write!(f, "f{}", self.index)?,
            Kind::Q => f.write_str("q")?,
            Kind::R => f.write_str("r")?,
            Kind::Spectral => {
                return match self.index {
                    1 => f.write_str("lam"),
                    2 => f.write_str("mu"),
                    3 => f.write_str("nu"),
                    n => write!(f, "spec{n}"),
                };
            }
        }
        if self.jet.is_empty() {
            return Ok(());
        }
        if matches!(self.kind, Kind::Q | Kind::R) && self.jet.only_time(1) {
            f.write_str("_")?;
            for _ in 0..self.jet.count(1) {
                f.write_str("1")?;
            }
            Ok(())
        } else {
            write!(f, "_d{}", self.jet)
        }
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid variable `{s}`"));
        match s {
            "lam" => return Ok(Variable::lambda()),
            "mu" => return Ok(Variable::mu()),
            "nu" => return Ok(Variable::nu()),
            _ => {}
        }
        let (head, jet) = match s.split_once("_d{") {
            Some((head, rest)) => {
                let body = rest.strip_suffix('}').ok_or_else(bad)?;
                let mut pairs = Vec::new();
                for item in body.split(',').filter(|p| !p.is_empty()) {
                    let (t, c) = item.split_once(':').ok_or_else(bad)?;
                    let t: u32 = t.trim().parse().map_err(|_| bad())?;
                    let c: u32 = c.trim().parse().map_err(|_| bad())?;
                    pairs.push((t, c));
                }
                (head, Jet::new(pairs))
            }
            None => match s.split_once('_') {
                Some((head, ones)) if !ones.is_empty() && ones.chars().all(|c| c == '1') => {
                    (head, Jet::new([(1, ones.len() as u32)]))
                }
                Some(_) => return Err(bad()),
                None => (s, Jet::default()),
            },
        };
        let var = match head {
            "q" => Variable::q(),
            "r" => Variable::r(),
            _ => {
                let (kind, digits) = match head.split_at_checked(1) {
                    Some(("e", d)) => (Kind::E, d),
                    Some(("f", d)) => (Kind::F, d),
                    _ => return Err(bad()),
                };
                let index: u32 = digits.parse().map_err(|_| bad())?;
                if index == 0 {
                    return Err(bad());
                }
                Variable { kind, index, jet: Jet::default() }
            }
        };
        Ok(var.with_jet(jet))
    }
}

/// A product of variable powers, sorted by variable, exponents positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Variable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Variable) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(powers: impl IntoIterator<Item = (Variable, u32)>) -> Self {
        let mut map: BTreeMap<Variable, u32> = BTreeMap::new();
        for (v, e) in powers {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn powers(&self) -> &[(Variable, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: &Variable) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map_or(0, |pos| self.0[pos].1)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / v`, together with the old exponent of `v`; `None` if `v` is
    /// absent.
    fn divide_by(&self, v: &Variable) -> Option<(Monomial, u32)> {
        let pos = self.0.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let exp = self.0[pos].1;
        let mut rest = self.0.clone();
        if exp == 1 {
            rest.remove(pos);
        } else {
            rest[pos].1 -= 1;
        }
        Some((Monomial(rest), exp))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Within a degree: variables ascending, higher powers first.
        self.degree().cmp(&other.degree()).then_with(|| {
            for ((va, ea), (vb, eb)) in self.0.iter().zip(&other.0) {
                let ord = va.cmp(vb).then(eb.cmp(ea));
                if ord.is_ne() {
                    return ord;
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (n, (v, e)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A sparse polynomial with coefficients in `S`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<S> {
    terms: BTreeMap<Monomial, S>,
}

impl<S: Scalar> Default for Poly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> Poly<S> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: S, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Variable) -> Self {
        Self::term(S::one(), Monomial::var(v))
    }

    pub fn e(j: u32) -> Self {
        Self::var(Variable::e(j))
    }

    pub fn f(j: u32) -> Self {
        Self::var(Variable::f(j))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, S)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    /// The constant coefficient if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: &S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| {
                let mut y = x.clone();
                y *= c;
                (m.clone(), y)
            })
            .collect();
        Poly { terms }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Formal partial derivative in `v`.
    pub fn partial(&self, v: &Variable) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((rest, exp)) = m.divide_by(v) {
                let mut k = c.clone();
                k *= &S::from_int(exp as i64);
                out.add_term(rest, &k);
            }
        }
        out
    }

    /// Exact value under `assignment`, which must cover every variable.
    pub fn evaluate(&self, assignment: &HashMap<Variable, S>) -> Result<S> {
        let mut total = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = assignment
                    .get(v)
                    .ok_or_else(|| Error::MissingVariable(v.to_string()))?;
                t *= &x.pow(*e);
            }
            total += &t;
        }
        Ok(total)
    }

    /// Replace every variable `v` for which `rule(v)` yields a polynomial;
    /// other variables are kept.
    pub fn substitute<F>(&self, mut rule: F) -> Result<Self>
    where
        F: FnMut(&Variable) -> Result<Option<Poly<S>>>,
    {
        let mut images: HashMap<Variable, Option<Poly<S>>> = HashMap::new();
        let mut powers: HashMap<(Variable, u32), Poly<S>> = HashMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut t = Poly::constant(c.clone());
            for (v, e) in &m.0 {
                if !images.contains_key(v) {
                    let img = rule(v)?;
                    images.insert(v.clone(), img);
                }
                match &images[v] {
                    None => kept.push((v.clone(), *e)),
                    Some(img) => {
                        let key = (v.clone(), *e);
                        if !powers.contains_key(&key) {
                            powers.insert(key.clone(), img.pow(*e));
                        }
                        t = &t * &powers[&key];
                    }
                }
            }
            if !kept.is_empty() {
                t = &t * &Poly::term(S::one(), Monomial(kept));
            }
            out += &t;
        }
        Ok(out)
    }

    /// Substitute one variable by a polynomial.
    pub fn substitute_var(&self, v: &Variable, image: &Poly<S>) -> Self {
        self.substitute(|w| Ok((w == v).then(|| image.clone())))
            .expect("infallible rule")
    }

    /// Off-shell total derivative in `time`: every field variable is raised
    /// by one jet step; spectral parameters are constants.
    pub fn total_derivative(&self, time: u32) -> Self {
        let mut out = Self::zero();
        for v in self.variables() {
            if v.is_field() {
                out += &(&self.partial(&v) * &Poly::var(v.raised(time)));
            }
        }
        out
    }

    /// Apply a derivation given on variables: `Σ_v ∂p/∂v · image(v)`.
    pub fn derivation<F>(&self, mut image: F) -> Result<Self>
    where
        F: FnMut(&Variable) -> Result<Option<Poly<S>>>,
    {
        let mut out = Self::zero();
        for v in self.variables() {
            if let Some(img) = image(&v)? {
                if !img.is_zero() {
                    out += &(&self.partial(&v) * &img);
                }
            }
        }
        Ok(out)
    }

    /// Does every monomial have equal total e-degree and f-degree?
    pub fn monomial_balance(&self) -> Result<bool> {
        for m in self.terms.keys() {
            let mut balance: i64 = 0;
            for (v, e) in &m.0 {
                if !v.is_phase() {
                    return Err(Error::NotPhaseVariable(v.to_string()));
                }
                match v.kind {
                    Kind::E => balance += *e as i64,
                    _ => balance -= *e as i64,
                }
            }
            if balance != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Split by powers of `v`: `p = Σ_n coeffs[n] v^n`.
    pub fn coefficients_in(&self, v: &Variable) -> Vec<Poly<S>> {
        let mut out: Vec<Poly<S>> = Vec::new();
        for (m, c) in &self.terms {
            let n = m.exponent(v) as usize;
            let rest = Monomial(m.0.iter().filter(|(w, _)| w != v).cloned().collect());
            if out.len() <= n {
                out.resize_with(n + 1, Poly::zero);
            }
            out[n].add_term(rest, c);
        }
        out
    }

    /// Largest index of a phase variable `e_j`/`f_j` (including jets), or 0.
    pub fn max_phase_index(&self) -> u32 {
        self.variables()
            .iter()
            .filter(|v| matches!(v.kind, Kind::E | Kind::F))
            .map(|v| v.index)
            .max()
            .unwrap_or(0)
    }

    pub fn map_coefficients<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl<S: Scalar> From<S> for Poly<S> {
    fn from(c: S) -> Self {
        Poly::constant(c)
    }
}

impl<S: Scalar> AddAssign<&Poly<S>> for Poly<S> {
    fn add_assign(&mut self, rhs: &Poly<S>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl<S: Scalar> SubAssign<&Poly<S>> for Poly<S> {
    fn sub_assign(&mut self, rhs: &Poly<S>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), &(-c.clone()));
        }
    }
}

impl<S: Scalar> Add for &Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<S: Scalar> Sub for &Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<S: Scalar> Mul for &Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        let mut out = Poly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut c = ca.clone();
                c *= cb;
                out.add_term(ma.mul(mb), &c);
            }
        }
        out
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        self.scale(&(-S::one()))
    }
}

impl<S: Scalar> Add for Poly<S> {
    type Output = Poly<S>;
    fn add(mut self, rhs: Poly<S>) -> Poly<S> {
        self += &rhs;
        self
    }
}

impl<S: Scalar> Sub for Poly<S> {
    type Output = Poly<S>;
    fn sub(mut self, rhs: Poly<S>) -> Poly<S> {
        self -= &rhs;
        self
    }
}

impl<S: Scalar> Mul for Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: Poly<S>) -> Poly<S> {
        &self * &rhs
    }
}

impl<S: Scalar> Neg for Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        -&self
    }
}

/// Canonical text: `(coeff)*monomial` terms in canonical order joined by
/// ` + `, e.g. `(-2i)*e2*f2 + (-1)*e1^2*f1^2`; the zero polynomial is `0`.
impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{self}]")
    }
}

/// Parses the canonical format and, more generally, expressions built from
/// scalars (`3/8`, `2i`, `i`), variables, `+`, `-`, `*`, `^` and brackets.
impl<S: Scalar> FromStr for Poly<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser { src: s, pos: 0 };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != s.len() {
            return Err(parser.error("unexpected input"));
        }
        Ok(p)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} of `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().ok()
    }

    fn expr<S: Scalar>(&mut self) -> Result<Poly<S>> {
        let mut negate = false;
        if self.eat('-') {
            negate = true;
        } else {
            self.eat('+');
        }
        let first = self.term()?;
        let mut out = if negate { -first } else { first };
        loop {
            if self.eat('+') {
                out += &self.term()?;
            } else if self.eat('-') {
                out -= &self.term()?;
            } else {
                return Ok(out);
            }
        }
    }

    fn term<S: Scalar>(&mut self) -> Result<Poly<S>> {
        let mut out = self.power()?;
        while self.eat('*') {
            out = &out * &self.power()?;
        }
        Ok(out)
    }

    fn power<S: Scalar>(&mut self) -> Result<Poly<S>> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let n = self.digits().ok_or_else(|| self.error("expected exponent"))?;
            return Ok(base.pow(u32::try_from(n).map_err(|_| self.error("exponent too large"))?));
        }
        Ok(base)
    }

    fn atom<S: Scalar>(&mut self) -> Result<Poly<S>> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-self.atom()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits().ok_or_else(|| self.error("number too large"))?;
                let mut den = 1;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    den = self.digits().filter(|d| *d != 0).ok_or_else(|| self.error("expected denominator"))?;
                }
                let mut c = S::from_ratio(num, den);
                if self.peek() == Some('i') && !self.ident_follows(1) {
                    self.pos += 1;
                    c = c * S::imag_unit();
                }
                Ok(Poly::constant(c))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                if self.src[start..self.pos].ends_with("_d") && self.peek() == Some('{') {
                    let close = self.src[self.pos..].find('}').ok_or_else(|| self.error("unclosed jet"))?;
                    self.pos += close + 1;
                }
                let word = &self.src[start..self.pos];
                if word == "i" {
                    return Ok(Poly::constant(S::imag_unit()));
                }
                Ok(Poly::var(word.parse()?))
            }
            _ => Err(self.error("expected a scalar, variable or `(`")),
        }
    }

    /// Is the character `offset` bytes ahead part of an identifier?
    fn ident_follows(&self, offset: usize) -> bool {
        self.src[self.pos + offset..]
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}
