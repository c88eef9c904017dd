//! Forms of the variational bicomplex over the jet ring.
//!
//! A [`VBForm`] is a finite sum `c · δv₁ ∧ … ∧ δv_p ∧ dx^{t₁} ∧ … ∧ dx^{t_q}`
//! with polynomial coefficients. Every generator is odd. Terms are kept with
//! vertical legs first, then horizontal legs, each sorted; the reordering sign
//! is folded into the coefficient, so structural equality is equality of
//! forms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::akns::Flows;
use crate::error::Result;
use crate::poly::{Kind, Poly, Variable};
use crate::scalar::Scalar;

/// One odd generator: `δv` or `dx^t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Leg {
    Delta(Variable),
    Dx(u32),
}

/// Sorted legs of a term: vertical then horizontal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Legs {
    pub vertical: Vec<Variable>,
    pub horizontal: Vec<u32>,
}

impl Legs {
    pub fn bidegree(&self) -> (usize, usize) {
        (self.vertical.len(), self.horizontal.len())
    }

    fn to_list(&self) -> Vec<Leg> {
        self.vertical
            .iter()
            .cloned()
            .map(Leg::Delta)
            .chain(self.horizontal.iter().copied().map(Leg::Dx))
            .collect()
    }
}

/// Sort odd generators; `None` if two coincide, otherwise the legs and the
/// sign of the permutation.
fn canonical_legs(mut legs: Vec<Leg>) -> Option<(Legs, bool)> {
    let mut negative = false;
    // insertion sort, counting transpositions
    for i in 1..legs.len() {
        let mut j = i;
        while j > 0 && legs[j - 1] > legs[j] {
            legs.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if legs.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let mut out = Legs::default();
    for leg in legs {
        match leg {
            Leg::Delta(v) => out.vertical.push(v),
            Leg::Dx(t) => out.horizontal.push(t),
        }
    }
    Some((out, negative))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VBForm<S: Scalar> {
    terms: BTreeMap<Legs, Poly<S>>,
}

impl<S: Scalar> Default for VBForm<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> VBForm<S> {
    pub fn zero() -> Self {
        VBForm { terms: BTreeMap::new() }
    }

    /// The (0,0)-form `p`.
    pub fn function(p: Poly<S>) -> Self {
        let mut out = Self::zero();
        out.add_term(Legs::default(), p);
        out
    }

    /// `c` times the wedge of `legs` in the given order.
    pub fn term(c: Poly<S>, legs: impl IntoIterator<Item = Leg>) -> Self {
        let mut out = Self::zero();
        out.add_legs(c, legs.into_iter().collect());
        out
    }

    pub fn delta(v: Variable) -> Self {
        Self::term(Poly::one(), [Leg::Delta(v)])
    }

    pub fn dx(t: u32) -> Self {
        Self::term(Poly::one(), [Leg::Dx(t)])
    }

    fn add_term(&mut self, legs: Legs, c: Poly<S>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&legs) {
            Some(old) => {
                *old = &*old + &c;
                if old.is_zero() {
                    self.terms.remove(&legs);
                }
            }
            None => {
                self.terms.insert(legs, c);
            }
        }
    }

    fn add_legs(&mut self, c: Poly<S>, legs: Vec<Leg>) {
        if let Some((legs, negative)) = canonical_legs(legs) {
            self.add_term(legs, if negative { -c } else { c });
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&Legs, &Poly<S>)> {
        self.terms.iter()
    }

    /// Coefficient of the wedge of `legs` (given in any order).
    pub fn coefficient(&self, legs: impl IntoIterator<Item = Leg>) -> Poly<S> {
        match canonical_legs(legs.into_iter().collect()) {
            None => Poly::zero(),
            Some((legs, negative)) => {
                let c = self.terms.get(&legs).cloned().unwrap_or_default();
                if negative {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// The part of the form carrying exactly the horizontal legs `dxs`
    /// (sorted), with those legs stripped.
    pub fn horizontal_component(&self, dxs: &[u32]) -> Self {
        let mut out = Self::zero();
        for (legs, c) in &self.terms {
            if legs.horizontal == dxs {
                let stripped = Legs { vertical: legs.vertical.clone(), horizontal: Vec::new() };
                out.add_term(stripped, c.clone());
            }
        }
        out
    }

    /// The set of bidegrees present.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.terms.keys().map(Legs::bidegree).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn scale(&self, c: &Poly<S>) -> Self {
        let mut out = Self::zero();
        for (legs, k) in &self.terms {
            out.add_term(legs.clone(), k * c);
        }
        out
    }

    pub fn scale_scalar(&self, c: &S) -> Self {
        self.scale(&Poly::constant(c.clone()))
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&Poly<S>) -> Result<Poly<S>>) -> Result<Self> {
        let mut out = Self::zero();
        for (legs, c) in &self.terms {
            out.add_term(legs.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (l1, c1) in &self.terms {
            for (l2, c2) in &other.terms {
                let mut legs = l1.to_list();
                legs.extend(l2.to_list());
                out.add_legs(c1 * c2, legs);
            }
        }
        out
    }

    /// The vertical differential `δ`. Spectral parameters are constants.
    pub fn vertical_delta(&self) -> Self {
        let mut out = Self::zero();
        for (legs, c) in &self.terms {
            for w in c.variables() {
                if w.kind == Kind::Spectral {
                    continue;
                }
                let mut list = vec![Leg::Delta(w.clone())];
                list.extend(legs.to_list());
                out.add_legs(c.partial(&w), list);
            }
        }
        out
    }

    /// The horizontal differential `d` over the active times `times`:
    /// `df = Σ ∂_t f dx^t` and `d(δv) = −Σ δ(∂_t v) ∧ dx^t`.
    pub fn horizontal_d(&self, times: &[u32]) -> Self {
        let mut out = Self::zero();
        for (legs, c) in &self.terms {
            let list = legs.to_list();
            for &t in times {
                let mut first = vec![Leg::Dx(t)];
                first.extend(list.iter().cloned());
                out.add_legs(c.total_derivative(t), first);
                for (idx, leg) in list.iter().enumerate() {
                    let Leg::Delta(v) = leg else { continue };
                    let mut replaced = list[..idx].to_vec();
                    replaced.push(Leg::Delta(v.raised(t)));
                    replaced.push(Leg::Dx(t));
                    replaced.extend(list[idx + 1..].iter().cloned());
                    // graded Leibniz sign (−1)^idx times the sign of d(δv)
                    let c = if idx % 2 == 0 { -c.clone() } else { c.clone() };
                    out.add_legs(c, replaced);
                }
            }
        }
        out
    }

    /// Contraction with one odd vector `X` given by its pairings with legs.
    fn contract(&self, mut pairing: impl FnMut(&Leg) -> Option<Poly<S>>) -> Self {
        let mut out = Self::zero();
        for (legs, c) in &self.terms {
            let list = legs.to_list();
            for (idx, leg) in list.iter().enumerate() {
                let Some(p) = pairing(leg) else { continue };
                let mut rest = list.clone();
                rest.remove(idx);
                let k = &p * c;
                out.add_legs(if idx % 2 == 0 { k } else { -k }, rest);
            }
        }
        out
    }

    /// Interior product `ι_ξ`. A multivector `X₁ ∧ … ∧ X_r` acts as
    /// `ι_{X₁} ∘ … ∘ ι_{X_r}`.
    pub fn interior(&self, xi: &VectorField<S>) -> Self {
        let mut out = Self::zero();
        for (gens, c) in &xi.terms {
            let mut acc = self.clone();
            for g in gens.iter().rev() {
                acc = acc.contract(|leg| match (g, leg) {
                    (Generator::Partial(u), Leg::Delta(v)) if u == v => Some(Poly::one()),
                    (Generator::Time(s), Leg::Dx(t)) if s == t => Some(Poly::one()),
                    _ => None,
                });
            }
            out = &out + &acc.scale(c);
        }
        out
    }

    /// Contraction with `∂̃_k = Σ ∂_k v ∂/∂v` over every field variable `v`.
    pub fn vertical_lift_contract(&self, k: u32) -> Self {
        self.contract(|leg| match leg {
            Leg::Delta(v) => Some(Poly::var(v.raised(k))),
            Leg::Dx(_) => None,
        })
    }

    /// Substitute field variables by polynomials in both coefficients and
    /// vertical legs (`δv ↦ δ(image of v)`); `None` keeps a variable.
    pub fn pull_back(&self, mut rule: impl FnMut(&Variable) -> Result<Option<Poly<S>>>) -> Result<Self> {
        let mut cache: HashMap<Variable, Option<Poly<S>>> = HashMap::new();
        let mut image = |v: &Variable| -> Result<Option<Poly<S>>> {
            if let Some(p) = cache.get(v) {
                return Ok(p.clone());
            }
            let p = rule(v)?;
            cache.insert(v.clone(), p.clone());
            Ok(p)
        };
        let mut out = Self::zero();
        for (legs, c) in &self.terms {
            let mut acc = Self::function(c.substitute(&mut image)?);
            for v in &legs.vertical {
                let leg = match image(v)? {
                    Some(p) => Self::function(p).vertical_delta(),
                    None => Self::delta(v.clone()),
                };
                acc = acc.wedge(&leg);
                if acc.is_zero() {
                    break;
                }
            }
            let mut dxs = Self::function(Poly::one());
            for &t in &legs.horizontal {
                dxs = dxs.wedge(&Self::dx(t));
            }
            out = &out + &acc.wedge(&dxs);
        }
        Ok(out)
    }

    /// Impose the flows on coefficients and on jets under `δ`.
    pub fn onshell_reduce(&self, flows: &Flows<S>) -> Result<Self> {
        let mut cache = HashMap::new();
        self.pull_back(|v| {
            if v.is_jet() {
                flows.reduce_var(v, &mut cache).map(Some)
            } else {
                Ok(None)
            }
        })
    }

    /// The first term, rendered; used as a failure witness.
    pub fn first_term(&self) -> Option<String> {
        self.terms.iter().next().map(|(l, c)| render_term(l, c))
    }
}

fn render_term<S: Scalar>(legs: &Legs, c: &Poly<S>) -> String {
    let mut out = if c.len() > 1 { format!("({c})") } else { c.to_string() };
    let mut sep = " * ";
    for v in &legs.vertical {
        out.push_str(&format!("{sep}δ[{v}]"));
        sep = " ∧ ";
    }
    for t in &legs.horizontal {
        out.push_str(&format!("{sep}dx[{t}]"));
        sep = " ∧ ";
    }
    out
}

impl<S: Scalar> fmt::Display for VBForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(l, c)| render_term(l, c)).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<S: Scalar> fmt::Debug for VBForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VBForm[{self}]")
    }
}

impl<S: Scalar> Add for &VBForm<S> {
    type Output = VBForm<S>;
    fn add(self, rhs: &VBForm<S>) -> VBForm<S> {
        let mut out = self.clone();
        for (legs, c) in &rhs.terms {
            out.add_term(legs.clone(), c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &VBForm<S> {
    type Output = VBForm<S>;
    fn sub(self, rhs: &VBForm<S>) -> VBForm<S> {
        let mut out = self.clone();
        for (legs, c) in &rhs.terms {
            out.add_term(legs.clone(), -c.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &VBForm<S> {
    type Output = VBForm<S>;
    fn neg(self) -> VBForm<S> {
        VBForm { terms: self.terms.iter().map(|(l, c)| (l.clone(), -c.clone())).collect() }
    }
}

/// Generator of (multi)vector fields: `∂/∂v` or `∂/∂x^t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Partial(Variable),
    Time(u32),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Partial(v) => write!(f, "∂[{v}]"),
            Generator::Time(t) => write!(f, "∂[x{t}]"),
        }
    }
}

/// Sum of polynomial multiples of wedge products of odd generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorField<S: Scalar> {
    terms: BTreeMap<Vec<Generator>, Poly<S>>,
}

impl<S: Scalar> Default for VectorField<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> VectorField<S> {
    pub fn zero() -> Self {
        VectorField { terms: BTreeMap::new() }
    }

    /// `c` times the wedge of `gens` in the given order.
    pub fn term(c: Poly<S>, gens: impl IntoIterator<Item = Generator>) -> Self {
        let mut out = Self::zero();
        out.add(c, gens.into_iter().collect());
        out
    }

    fn add(&mut self, c: Poly<S>, mut gens: Vec<Generator>) {
        let mut negative = false;
        for i in 1..gens.len() {
            let mut j = i;
            while j > 0 && gens[j - 1] > gens[j] {
                gens.swap(j - 1, j);
                negative = !negative;
                j -= 1;
            }
        }
        if c.is_zero() || gens.windows(2).any(|w| w[0] == w[1]) {
            return;
        }
        let c = if negative { -c } else { c };
        let sum = match self.terms.remove(&gens) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(gens, sum);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add(c.clone(), g.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Generator>, &Poly<S>)> {
        self.terms.iter()
    }

    /// Coefficient of the wedge of `gens` (any order).
    pub fn coefficient(&self, gens: impl IntoIterator<Item = Generator>) -> Poly<S> {
        let probe = Self::term(Poly::one(), gens);
        match probe.terms.iter().next() {
            None => Poly::zero(),
            Some((g, sign)) => &self.terms.get(g).cloned().unwrap_or_default() * sign,
        }
    }
}

impl<S: Scalar> fmt::Display for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| {
                let gens: Vec<String> = g.iter().map(|x| x.to_string()).collect();
                let c = if c.len() > 1 { format!("({c})") } else { c.to_string() };
                format!("{c} * {}", gens.join(" ∧ "))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<S: Scalar> fmt::Debug for VectorField<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField[{self}]")
    }
}
