//! Hamiltonian forms and the multi-time Poisson bracket.
//!
//! The single-time bracket attached to `ω_k = Σ δf_i ∧ δe_{k+1−i}` is
//! `{F, G}_k = Σ_{j=1}^k (∂F/∂f_j ∂G/∂e_{k+1−j} − ∂F/∂e_j ∂G/∂f_{k+1−j})`.
//! The multi-time bracket `{|F|}{G} = (−1)^r ι_{ξ_F} δG` is evaluated with
//! the bicomplex interior product, using the representative vector fields
//!
//! ```text
//! ξ_F = Σ_k (−∂F_k/∂f₁ ∂_{e_k} + ∂F_k/∂e₁ ∂_{f_k})            (1-forms)
//! ξ_H = Σ_i (−∂H/∂f_i ∂_{e₁} ∧ ∂_i + ∂H/∂e_i ∂_{f₁} ∧ ∂_i)    (0-forms)
//! ```

use crate::akns::{AknsFrame, Flows};
use crate::bicomplex::{Generator, Leg, VBForm, VectorField};
use crate::error::{need_order, Error, Result};
use crate::multiform::hamiltonian_coeff;
use crate::poly::{Kind, Poly, Variable};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::series::Mat2;

/// A horizontal 1-form `Σ_{k=0}^K F_k dx^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamOneForm<S: Scalar> {
    comps: Vec<Poly<S>>,
}

impl<S: Scalar> HamOneForm<S> {
    /// Components `F_0, …, F_K`; at least one is required.
    pub fn new(comps: Vec<Poly<S>>) -> Self {
        assert!(!comps.is_empty(), "a 1-form needs at least the x^0 component");
        HamOneForm { comps }
    }

    pub fn max_time(&self) -> u32 {
        self.comps.len() as u32 - 1
    }

    pub fn comp(&self, k: u32) -> &Poly<S> {
        &self.comps[k as usize]
    }

    pub fn comps(&self) -> &[Poly<S>] {
        &self.comps
    }

    pub fn truncate(&self, k: u32) -> Self {
        HamOneForm { comps: self.comps[..=k.min(self.max_time()) as usize].to_vec() }
    }

    pub fn to_form(&self) -> VBForm<S> {
        let mut out = VBForm::zero();
        for (k, c) in self.comps.iter().enumerate() {
            out = &out + &VBForm::term(c.clone(), [Leg::Dx(k as u32)]);
        }
        out
    }

    /// Read `Σ F_k dx^k` back from a form of bidegree (0,1).
    pub fn from_form(form: &VBForm<S>, max_time: u32) -> Result<Self> {
        for (legs, _) in form.terms() {
            if !legs.vertical.is_empty() || legs.horizontal.len() != 1 || legs.horizontal[0] > max_time {
                return Err(Error::Precondition(format!("not a horizontal 1-form up to x^{max_time}: {form}")));
            }
        }
        Ok(HamOneForm::new((0..=max_time).map(|k| form.coefficient([Leg::Dx(k)])).collect()))
    }

    /// The criterion for being Hamiltonian: `F_0` constant, `F_k` a
    /// polynomial in `e_1..e_k`, `f_1..f_k`, and the shift property
    /// `∂F_k/∂e_j = ∂F_{k+1}/∂e_{j+1}` (same for `f`).
    pub fn criterion(&self) -> std::result::Result<(), String> {
        for (k, c) in self.comps.iter().enumerate() {
            for v in c.variables() {
                match v.kind {
                    Kind::Spectral => {}
                    Kind::E | Kind::F if v.jet.is_empty() && v.index as usize <= k => {}
                    _ => return Err(format!("component {k} depends on {v}")),
                }
            }
        }
        for k in 1..self.comps.len() - 1 {
            for j in 1..=k as u32 {
                for (here, next) in [(Variable::e(j), Variable::e(j + 1)), (Variable::f(j), Variable::f(j + 1))] {
                    if self.comps[k].partial(&here) != self.comps[k + 1].partial(&next) {
                        return Err(format!("shift property fails at component {k}, {here}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_hamiltonian(&self) -> bool {
        self.criterion().is_ok()
    }

    /// `ξ_F` when the criterion holds.
    pub fn vector_field(&self) -> Option<VectorField<S>> {
        self.criterion().ok()?;
        let mut xi = VectorField::zero();
        for k in 1..=self.max_time() {
            let c = self.comp(k);
            xi = xi.plus(&VectorField::term(-c.partial(&Variable::f(1)), [Generator::Partial(Variable::e(k))]));
            xi = xi.plus(&VectorField::term(c.partial(&Variable::e(1)), [Generator::Partial(Variable::f(k))]));
        }
        Some(xi)
    }
}

/// Verdict and vector field for a candidate 1-form.
pub fn is_hamiltonian_oneform<S: Scalar>(form: &HamOneForm<S>) -> (bool, Option<VectorField<S>>) {
    let xi = form.vector_field();
    (xi.is_some(), xi)
}

fn check_phase<S: Scalar>(h: &Poly<S>) -> Result<()> {
    match h.variables().into_iter().find(|v| !(v.is_phase() || v.kind == Kind::Spectral)) {
        Some(v) => Err(Error::NotHamiltonian(format!("0-form depends on `{v}`"))),
        None => Ok(()),
    }
}

/// `ξ_H = Σ_i (−∂H/∂f_i ∂_{e₁} ∧ ∂_i + ∂H/∂e_i ∂_{f₁} ∧ ∂_i)`.
pub fn hamiltonian_vf_zeroform<S: Scalar>(h: &Poly<S>) -> Result<VectorField<S>> {
    check_phase(h)?;
    let mut xi = VectorField::zero();
    for i in 1..=h.max_phase_index() {
        let de1 = Generator::Partial(Variable::e(1));
        let df1 = Generator::Partial(Variable::f(1));
        xi = xi.plus(&VectorField::term(-h.partial(&Variable::f(i)), [de1, Generator::Time(i)]));
        xi = xi.plus(&VectorField::term(h.partial(&Variable::e(i)), [df1, Generator::Time(i)]));
    }
    Ok(xi)
}

/// `{F, G}_k`.
pub fn single_time_pb<S: Scalar>(f: &Poly<S>, g: &Poly<S>, k: u32) -> Result<Poly<S>> {
    for p in [f, g] {
        check_phase(p)?;
        let n = p.max_phase_index();
        if n > k {
            return Err(Error::Precondition(format!("bracket at time {k} of a polynomial in e_{n}, f_{n}")));
        }
    }
    let mut out = Poly::zero();
    for j in 1..=k {
        let m = k + 1 - j;
        out += &(&f.partial(&Variable::f(j)) * &g.partial(&Variable::e(m)));
        out -= &(&f.partial(&Variable::e(j)) * &g.partial(&Variable::f(m)));
    }
    Ok(out)
}

/// A Hamiltonian horizontal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HamForm<S: Scalar> {
    Zero(Poly<S>),
    One(HamOneForm<S>),
}

impl<S: Scalar> HamForm<S> {
    pub fn degree(&self) -> u32 {
        match self {
            HamForm::Zero(_) => 0,
            HamForm::One(_) => 1,
        }
    }

    pub fn to_form(&self) -> VBForm<S> {
        match self {
            HamForm::Zero(h) => VBForm::function(h.clone()),
            HamForm::One(f) => f.to_form(),
        }
    }

    pub fn vector_field(&self) -> Result<VectorField<S>> {
        match self {
            HamForm::Zero(h) => hamiltonian_vf_zeroform(h),
            HamForm::One(f) => f
                .vector_field()
                .ok_or_else(|| Error::NotHamiltonian(f.criterion().unwrap_err())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            HamForm::Zero(h) => h.is_zero(),
            HamForm::One(f) => f.comps.iter().all(Poly::is_zero),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (HamForm::Zero(a), HamForm::Zero(b)) => Ok(HamForm::Zero(a - b)),
            (HamForm::One(a), HamForm::One(b)) => {
                let k = a.max_time().min(b.max_time()) as usize;
                Ok(HamForm::One(HamOneForm::new((0..=k).map(|i| &a.comps[i] - &b.comps[i]).collect())))
            }
            _ => Err(Error::Precondition("forms of different degree".into())),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let neg = match other {
            HamForm::Zero(h) => HamForm::Zero(-h.clone()),
            HamForm::One(f) => HamForm::One(HamOneForm::new(f.comps.iter().map(|c| -c.clone()).collect())),
        };
        self.sub(&neg)
    }

    fn render(&self) -> String {
        match self {
            HamForm::Zero(h) => h.to_string(),
            HamForm::One(f) => f.to_form().to_string(),
        }
    }
}

/// `{|F|}{G} = (−1)^r ι_{ξ_F} δG`, `r` the horizontal degree of `F`.
///
/// Two 1-forms are compared up to the smaller of their top times; a 0-form
/// paired with a 1-form needs the 1-form's components up to the highest
/// index the 0-form depends on.
pub fn multi_time_pb<S: Scalar>(f: &HamForm<S>, g: &HamForm<S>) -> Result<HamForm<S>> {
    let xi = f.vector_field()?;
    if let HamForm::One(gf) = g {
        gf.vector_field().ok_or_else(|| Error::NotHamiltonian(gf.criterion().unwrap_err()))?;
    }
    let top = |h: &Poly<S>, one: &HamOneForm<S>| -> Result<()> {
        need_order(h.max_phase_index(), one.max_time())
    };
    let g_form = match (f, g) {
        (HamForm::Zero(_), HamForm::Zero(_)) => return Ok(HamForm::Zero(Poly::zero())),
        (HamForm::One(a), HamForm::One(b)) => b.truncate(a.max_time()).to_form(),
        (HamForm::Zero(h), HamForm::One(b)) => {
            top(h, b)?;
            b.to_form()
        }
        (HamForm::One(a), HamForm::Zero(h)) => {
            top(h, a)?;
            g.to_form()
        }
    };
    let mut out = g_form.vertical_delta().interior(&xi);
    if f.degree() % 2 == 1 {
        out = -&out;
    }
    match (f, g) {
        (HamForm::One(a), HamForm::One(b)) => {
            Ok(HamForm::One(HamOneForm::from_form(&out, a.max_time().min(b.max_time()))?))
        }
        _ => {
            let value = out.coefficient([]);
            if &VBForm::function(value.clone()) != &out {
                return Err(Error::Precondition(format!("bracket is not a 0-form: {out}")));
            }
            Ok(HamForm::Zero(value))
        }
    }
}

/// The column `Σ_{k=0}^K Q^(k)(λ)_{ab} dx^k` of the Lax form in `var`.
pub fn lax_column<S: Scalar>(frame: &AknsFrame<S>, a: usize, b: usize, var: &Variable, max_time: u32) -> Result<HamOneForm<S>> {
    let comps = (0..=max_time)
        .map(|k| Ok(frame.lax_poly(k, var)?.get(a, b).clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(HamOneForm::new(comps))
}

type Mat4<S> = [[Poly<S>; 4]; 4];

fn mat4_zero<S: Scalar>() -> Mat4<S> {
    Default::default()
}

fn mat4_mul<S: Scalar>(x: &Mat4<S>, y: &Mat4<S>) -> Mat4<S> {
    let mut out = mat4_zero();
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j] += &(&x[i][k] * &y[k][j]);
            }
        }
    }
    out
}

/// Entrywise single-time brackets `{Q^(k)(λ)_{ab}, Q^(k)(μ)_{cd}}_k` in the
/// basis `1⊗1, 1⊗2, 2⊗1, 2⊗2`.
pub fn sklyanin_matrix<S: Scalar>(frame: &AknsFrame<S>, k: u32) -> Result<Mat4<S>> {
    let ql = frame.lax_poly(k, &Variable::lambda())?;
    let qm = frame.lax_poly(k, &Variable::mu())?;
    let mut out = mat4_zero();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    out[2 * a + c][2 * b + d] = single_time_pb(ql.get(a, b), qm.get(c, d), k)?;
                }
            }
        }
    }
    Ok(out)
}

/// `(λ − μ) M = −[P₁₂, Q^(k)(λ) ⊗ I + I ⊗ Q^(k)(μ)]`, with the right side
/// vanishing at `μ = λ`.
pub fn rmatrix_check<S: Scalar>(frame: &AknsFrame<S>, k: u32) -> Result<Report> {
    need_order(k, frame.order())?;
    let mut report = Report::new("rmatrix", &[("k", k as i64)]);
    let (lam, mu) = (Variable::lambda(), Variable::mu());
    let ql = frame.lax_poly(k, &lam)?;
    let qm = frame.lax_poly(k, &mu)?;
    let mut x = mat4_zero::<S>();
    let mut p = mat4_zero::<S>();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let (row, col) = (2 * a + c, 2 * b + d);
                    if c == d {
                        x[row][col] += ql.get(a, b);
                    }
                    if a == b {
                        x[row][col] += qm.get(c, d);
                    }
                    if a == d && c == b {
                        p[row][col] = Poly::one();
                    }
                }
            }
        }
    }
    let px = mat4_mul(&p, &x);
    let xp = mat4_mul(&x, &p);
    let m = sklyanin_matrix(frame, k)?;
    let diff = &Poly::var(lam.clone()) - &Poly::var(mu.clone());
    for row in 0..4 {
        for col in 0..4 {
            let rhs = &xp[row][col] - &px[row][col];
            let at_diagonal = rhs.substitute_var(&mu, &Poly::var(lam.clone()));
            report.zero_poly(format!("C[{row}{col}] at mu = lam"), &at_diagonal);
            report.zero_poly(format!("(lam - mu) M - C [{row}{col}]"), &(&(&diff * &m[row][col]) - &rhs));
        }
    }
    Ok(report)
}

fn abc<S: Scalar>(frame: &AknsFrame<S>, which: usize, n: i64) -> Result<Poly<S>> {
    if n < 0 {
        return Ok(Poly::zero());
    }
    let n = n as u32;
    match which {
        0 => frame.a_coeff(n),
        1 => frame.b_coeff(n),
        _ => frame.c_coeff(n),
    }
}

/// The nine families `{x_i, y_j}_k` for `x, y ∈ {a, b, c}`, `0 ≤ i, j ≤ k`.
pub fn pb_lemma_check<S: Scalar>(frame: &AknsFrame<S>, k: u32) -> Result<Report> {
    need_order(k, frame.order())?;
    let mut report = Report::new("pb-lemma", &[("k", k as i64)]);
    let names = ["a", "b", "c"];
    for i in 0..=k {
        for j in 0..=k {
            let n = i as i64 + j as i64 - k as i64 - 1;
            for x in 0..3 {
                for y in 0..3 {
                    let lhs = single_time_pb(&abc(frame, x, i as i64)?, &abc(frame, y, j as i64)?, k)?;
                    let expect = match (x, y) {
                        (0, 1) => abc(frame, 1, n)?,
                        (1, 0) => -abc(frame, 1, n)?,
                        (0, 2) => -abc(frame, 2, n)?,
                        (2, 0) => abc(frame, 2, n)?,
                        (1, 2) => abc(frame, 0, n)?.scale(&S::from_int(2)),
                        (2, 1) => abc(frame, 0, n)?.scale(&S::from_int(-2)),
                        _ => Poly::zero(),
                    };
                    report.zero_poly(format!("{{{}{i}, {}{j}}}", names[x], names[y]), &(&lhs - &expect));
                }
            }
        }
    }
    Ok(report)
}

/// `{|H_ij|}{W(λ)} = [Q^(i), Q^(j)]` and `D_i Q^(j) − D_j Q^(i) = [Q^(i), Q^(j)]`.
pub fn zc_hamiltonian_check<S: Scalar>(frame: &AknsFrame<S>, flows: &Flows<S>, i: u32, j: u32) -> Result<Report> {
    if i >= j {
        return Err(Error::Precondition(format!("need i < j, got ({i}, {j})")));
    }
    need_order(i + j + 1, frame.order())?;
    let mut report = Report::new("zc-hamiltonian", &[("i", i as i64), ("j", j as i64)]);
    let lam = Variable::lambda();
    let qi = frame.lax_poly(i, &lam)?;
    let qj = frame.lax_poly(j, &lam)?;
    let comm = qi.mul(&qj).sub(&qj.mul(&qi));
    let h = HamForm::Zero(hamiltonian_coeff(frame, i, j)?);
    let mut bracket = Mat2::zero();
    for a in 0..2 {
        for b in 0..2 {
            let w = HamForm::One(lax_column(frame, a, b, &lam, j)?);
            match multi_time_pb(&h, &w)? {
                HamForm::Zero(p) => bracket.0[a][b] = p,
                HamForm::One(_) => unreachable!("0-form bracket with a 1-form is a 0-form"),
            }
        }
    }
    report.zero_mat("{|H|}{W} - [Qi, Qj]", &bracket.sub(&comm));
    let flow = flows.apply_mat(i, &qj)?.sub(&flows.apply_mat(j, &qi)?);
    report.zero_mat("Di Qj - Dj Qi - [Qi, Qj]", &flow.sub(&comm));
    Ok(report)
}

/// Cyclic sum `{|{|F|}{G}|}{K} + {|{|K|}{F}|}{G} + {|{|G|}{K}|}{F}`, and the
/// Hamiltonian property of every inner bracket.
pub fn jacobi_check<S: Scalar>(label: &str, f: &HamForm<S>, g: &HamForm<S>, k: &HamForm<S>) -> Result<Report> {
    let mut report = Report::new("jacobi", &[]);
    report.check = format!("jacobi {label}");
    let mut sum: Option<HamForm<S>> = None;
    for (x, y, z) in [(f, g, k), (k, f, g), (g, k, f)] {
        let inner = multi_time_pb(x, y)?;
        if let HamForm::One(one) = &inner {
            report.ensure("inner bracket is Hamiltonian", one.is_hamiltonian());
        }
        let outer = multi_time_pb(&inner, z)?;
        sum = Some(match sum {
            None => outer,
            Some(s) => s.add(&outer)?,
        });
    }
    let sum = sum.expect("three terms");
    if !sum.is_zero() {
        report.fail("cyclic sum", sum.render());
    }
    Ok(report)
}

/// The triples checked by default: `(A, A, A)`, the Lax columns
/// `W⁺(λ), W⁻(μ), W³(ν)`, and `(A, W⁺(λ), H₁₂)`, all up to `max_time`.
pub fn default_jacobi_triples<S: Scalar>(frame: &AknsFrame<S>, max_time: u32) -> Result<Vec<(String, [HamForm<S>; 3])>> {
    need_order(max_time + 1, frame.order())?;
    let a = HamForm::One(crate::multiform::conservation_form(frame, max_time)?);
    let col = |r: usize, c: usize, v: Variable| -> Result<HamForm<S>> {
        Ok(HamForm::One(lax_column(frame, r, c, &v, max_time)?))
    };
    let wp = col(0, 1, Variable::lambda())?;
    let wm = col(1, 0, Variable::mu())?;
    let w3 = col(0, 0, Variable::nu())?;
    let mut out = vec![
        ("A,A,A".to_string(), [a.clone(), a.clone(), a.clone()]),
        ("W+,W-,W3".to_string(), [wp.clone(), wm, w3]),
    ];
    if max_time >= 2 && frame.order() >= 4 {
        let h = HamForm::Zero(hamiltonian_coeff(frame, 1, 2)?);
        out.push(("A,W+,H12".to_string(), [a, wp, h]));
    }
    Ok(out)
}
