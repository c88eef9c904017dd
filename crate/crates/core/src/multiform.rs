//! Lagrangian, symplectic and Hamiltonian multiforms of the hierarchy.
//!
//! Coefficients are polynomials in `e_j`, `f_j` and their time jets. Checks
//! return a [`Report`]; an insufficient truncation order is an error.

use crate::akns::{AknsFrame, Flows};
use crate::bicomplex::{Leg, VBForm};
use crate::error::{need_order, Error, Result};
use crate::poisson::HamOneForm;
use crate::poly::{Poly, Variable};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::series::{BiSeries, Mat2};

/// `H_ij = Tr Σ_{k=0}^i Q_k Q_{i+j+1−k}`; any `i`, `j ≥ 0`.
pub fn hamiltonian_coeff<S: Scalar>(frame: &AknsFrame<S>, i: u32, j: u32) -> Result<Poly<S>> {
    let n = i + j + 1;
    need_order(n, frame.order())?;
    let mut out = Poly::zero();
    for k in 0..=i {
        out += &frame.q_coeff(k)?.mul(&frame.q_coeff(n - k)?).trace();
    }
    Ok(out)
}

/// `V_ij = Σ_{k=0}^i (2 a_k a_m + b_k c_m + c_k b_m)`, `m = i+j+1−k`,
/// read off the scalar series rather than the matrices.
pub fn potential_coeff<S: Scalar>(frame: &AknsFrame<S>, i: u32, j: u32) -> Result<Poly<S>> {
    let n = i + j + 1;
    need_order(n, frame.order())?;
    let two = S::from_int(2);
    let mut out = Poly::zero();
    for k in 0..=i {
        let m = n - k;
        out += &(&frame.a_coeff(k)? * &frame.a_coeff(m)?).scale(&two);
        out += &(&frame.b_coeff(k)? * &frame.c_coeff(m)?);
        out += &(&frame.c_coeff(k)? * &frame.b_coeff(m)?);
    }
    Ok(out)
}

/// `H_ij` for `i, j ≤ n` as a bivariate table.
pub fn hamiltonian_table<S: Scalar>(frame: &AknsFrame<S>, n: u32) -> Result<BiSeries<S>> {
    need_order(2 * n + 1, frame.order())?;
    BiSeries::from_fn(n, n, |i, j| hamiltonian_coeff(frame, i, j))
}

fn jet<S: Scalar>(v: Variable, time: u32) -> Poly<S> {
    Poly::var(v.raised(time))
}

/// `½ Σ_{k=1}^j (f_k ∂_i e_{j+1−k} − e_k ∂_i f_{j+1−k})`.
fn kinetic_half<S: Scalar>(i: u32, j: u32) -> Poly<S> {
    let mut out = Poly::zero();
    for k in 1..=j {
        let m = j + 1 - k;
        out += &(&Poly::f(k) * &jet(Variable::e(m), i));
        out -= &(&Poly::e(k) * &jet(Variable::f(m), i));
    }
    out.scale(&S::from_ratio(1, 2))
}

/// The component `L_ij`, `i, j ≥ 1`, with first jets `∂_i e_k`, `∂_j f_k`.
pub fn lagrangian_coeff<S: Scalar>(frame: &AknsFrame<S>, i: u32, j: u32) -> Result<Poly<S>> {
    if i == 0 || j == 0 {
        return Err(Error::Precondition("Lagrangian coefficients need times i, j ≥ 1".into()));
    }
    let v = potential_coeff(frame, i, j)?;
    Ok(&(&kinetic_half(i, j) - &kinetic_half(j, i)) - &v)
}

/// Coefficient matrices of `φ` and `ψ = φ⁻¹` up to `z^n`.
struct PhiData<S: Scalar> {
    phi: Vec<Mat2<S>>,
    psi: Vec<Mat2<S>>,
    q0: Mat2<S>,
}

impl<S: Scalar> PhiData<S> {
    fn new(frame: &AknsFrame<S>, n: u32) -> Result<Self> {
        need_order(n, frame.order())?;
        let inv = frame.phi.inverse()?;
        let phi = (0..=n as i64).map(|k| frame.phi.coeff(k)).collect::<Result<_>>()?;
        let psi = (0..=n as i64).map(|k| inv.coeff(k)).collect::<Result<_>>()?;
        Ok(PhiData { phi, psi, q0: frame.q_coeff(0)? })
    }

    /// `[z^n] Tr(ψ ∂_t φ Q₀)` with off-shell jets.
    fn kinetic_trace(&self, t: u32, n: u32) -> Poly<S> {
        let mut out = Poly::zero();
        for a in 0..=n as usize {
            let dphi = self.phi[n as usize - a].map(|p| p.total_derivative(t));
            out += &self.psi[a].mul(&dphi).mul(&self.q0).trace();
        }
        out
    }

    /// `Ψ_n = Σ_{a+b=n} ψ_a δφ_b`.
    fn maurer_cartan(&self, n: u32) -> FormMat<S> {
        let mut out = FormMat::zero();
        for a in 0..=n as usize {
            out = out.add(&FormMat::delta(&self.phi[n as usize - a]).left_mul(&self.psi[a]));
        }
        out
    }

    /// `[z^(k+1)] Tr(Q₀ ψ δφ)`.
    fn omega1(&self, k: u32) -> VBForm<S> {
        self.maurer_cartan(k + 1).left_mul(&self.q0).trace()
    }

    /// `[z^(k+1)] (−Tr(Q₀ Ψ ∧ Ψ))`.
    fn omega(&self, k: u32) -> VBForm<S> {
        let mut out = VBForm::zero();
        for n in 0..=k + 1 {
            let w = self.maurer_cartan(n).left_mul(&self.q0).wedge(&self.maurer_cartan(k + 1 - n));
            out = &out - &w.trace();
        }
        out
    }
}

/// 2×2 matrix of forms.
#[derive(Clone)]
struct FormMat<S: Scalar>([[VBForm<S>; 2]; 2]);

impl<S: Scalar> FormMat<S> {
    fn zero() -> Self {
        FormMat(Default::default())
    }

    fn delta(m: &Mat2<S>) -> Self {
        let d = |i: usize, j: usize| VBForm::function(m.get(i, j).clone()).vertical_delta();
        FormMat([[d(0, 0), d(0, 1)], [d(1, 0), d(1, 1)]])
    }

    fn add(&self, o: &Self) -> Self {
        let s = |i: usize, j: usize| &self.0[i][j] + &o.0[i][j];
        FormMat([[s(0, 0), s(0, 1)], [s(1, 0), s(1, 1)]])
    }

    fn left_mul(&self, m: &Mat2<S>) -> Self {
        let e = |i: usize, j: usize| {
            &self.0[0][j].scale(m.get(i, 0)) + &self.0[1][j].scale(m.get(i, 1))
        };
        FormMat([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    fn wedge(&self, o: &Self) -> Self {
        let e = |i: usize, j: usize| &self.0[i][0].wedge(&o.0[0][j]) + &self.0[i][1].wedge(&o.0[1][j]);
        FormMat([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    fn trace(&self) -> VBForm<S> {
        &self.0[0][0] + &self.0[1][1]
    }
}

/// `K_ij = [z^(j+1)] Tr(ψ ∂_i φ Q₀) − [z^(i+1)] Tr(ψ ∂_j φ Q₀)`.
pub fn kinetic_coeff<S: Scalar>(frame: &AknsFrame<S>, i: u32, j: u32) -> Result<Poly<S>> {
    let data = PhiData::new(frame, i.max(j) + 1)?;
    Ok(&data.kinetic_trace(i, j + 1) - &data.kinetic_trace(j, i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticCoeff<S: Scalar> {
    pub k: u32,
    /// `ω⁽¹⁾_k`, a (1,0)-form.
    pub omega1: VBForm<S>,
    /// `ω_k = δω⁽¹⁾_k`.
    pub omega: VBForm<S>,
}

/// `ω⁽¹⁾_k = [z^(k+1)] Tr(Q₀ φ⁻¹ δφ)` and its vertical differential.
pub fn symplectic_coeff<S: Scalar>(frame: &AknsFrame<S>, k: u32) -> Result<SymplecticCoeff<S>> {
    let data = PhiData::new(frame, k + 1)?;
    let omega1 = data.omega1(k);
    let omega = omega1.vertical_delta();
    Ok(SymplecticCoeff { k, omega1, omega })
}

/// `ω_k` from `−Tr(Q₀ φ⁻¹δφ ∧ φ⁻¹δφ)`.
pub fn symplectic_form_direct<S: Scalar>(frame: &AknsFrame<S>, k: u32) -> Result<VBForm<S>> {
    Ok(PhiData::new(frame, k + 1)?.omega(k))
}

/// `Σ_{i=1}^k δf_i ∧ δe_{k+1−i}`.
pub fn darboux_form<S: Scalar>(k: u32) -> VBForm<S> {
    let mut out = VBForm::zero();
    for i in 1..=k {
        out = &out + &VBForm::term(Poly::one(), [Leg::Delta(Variable::f(i)), Leg::Delta(Variable::e(k + 1 - i))]);
    }
    out
}

pub fn verify_darboux<S: Scalar>(frame: &AknsFrame<S>, k: u32) -> Result<Report> {
    let mut report = Report::new("darboux", &[("k", k as i64)]);
    let data = PhiData::new(frame, k + 1)?;
    let target = darboux_form::<S>(k);
    report.zero_form("delta omega1 - darboux", &(&data.omega1(k).vertical_delta() - &target));
    report.zero_form("trace form - darboux", &(&data.omega(k) - &target));
    Ok(report)
}

fn two_form<S: Scalar>(c: Poly<S>, a: u32, b: u32) -> VBForm<S> {
    VBForm::term(c, [Leg::Dx(a), Leg::Dx(b)])
}

/// Smallest time `t ≥ 1` different from `i` and `j`.
pub fn auxiliary_time(i: u32, j: u32) -> u32 {
    (1..).find(|t| *t != i && *t != j).expect("unbounded range")
}

/// Order needed by [`el_equations`] and [`multiform_el`].
pub fn el_order(i: u32, j: u32) -> u32 {
    i + j + auxiliary_time(i, j)
}

/// The `dx^{ijt}` part of `δd𝓛` over the times `{i, j, t}` (off-shell),
/// with `𝓛 = L_ij dx^{ij} + L_jt dx^{jt} + L_ti dx^{ti}` and `t` auxiliary.
pub fn el_equations<S: Scalar>(frame: &AknsFrame<S>, i: u32, j: u32) -> Result<VBForm<S>> {
    if i == j || i == 0 || j == 0 {
        return Err(Error::Precondition(format!("EL equations need distinct times ≥ 1, got ({i}, {j})")));
    }
    let t = auxiliary_time(i, j);
    let lag = &(&two_form(lagrangian_coeff(frame, i, j)?, i, j)
        + &two_form(lagrangian_coeff(frame, j, t)?, j, t))
        + &two_form(lagrangian_coeff(frame, t, i)?, t, i);
    let mut times = [i, j, t];
    times.sort();
    Ok(lag.horizontal_d(&times).vertical_delta().horizontal_component(&times))
}

/// Every coefficient of [`el_equations`] vanishes under the flows.
pub fn multiform_el<S: Scalar>(frame: &AknsFrame<S>, flows: &Flows<S>, i: u32, j: u32) -> Result<Report> {
    need_order(el_order(i, j), frame.order())?;
    let mut report = Report::new("el", &[("i", i as i64), ("j", j as i64)]);
    let eqs = el_equations(frame, i, j)?;
    let mut cache = Default::default();
    for (legs, c) in eqs.terms() {
        let reduced = flows.reduce_with(c, &mut cache)?;
        let label = legs.vertical.iter().map(|v| format!("δ[{v}]")).collect::<Vec<_>>().join("∧");
        report.zero_poly(format!("coefficient of {label}"), &reduced);
    }
    report.ensure("nonempty system", !eqs.is_zero());
    Ok(report)
}

fn distinct_increasing(i: u32, j: u32, k: u32) -> Result<()> {
    if i < j && j < k {
        Ok(())
    } else {
        Err(Error::Precondition(format!("need i < j < k, got ({i}, {j}, {k})")))
    }
}

/// `D_i L_jk + D_k L_ij + D_j L_ki` on-shell.
pub fn closure_check<S: Scalar>(frame: &AknsFrame<S>, flows: &Flows<S>, i: u32, j: u32, k: u32) -> Result<Report> {
    distinct_increasing(i, j, k)?;
    if i == 0 {
        return Err(Error::Precondition("Lagrangian closure needs times ≥ 1".into()));
    }
    need_order(i + j + k, frame.order())?;
    let mut report = Report::new("closure", &[("i", i as i64), ("j", j as i64), ("k", k as i64)]);
    let mut cache = Default::default();
    let mut sum = Poly::zero();
    for (d, a, b) in [(i, j, k), (k, i, j), (j, k, i)] {
        let l = flows.reduce_with(&lagrangian_coeff(frame, a, b)?, &mut cache)?;
        sum += &flows.apply(d, &l)?;
    }
    report.zero_poly("cyclic sum", &sum);
    Ok(report)
}

/// `D_i H_jk + D_k H_ij + D_j H_ki = 0`.
pub fn hamiltonian_closure_check<S: Scalar>(
    frame: &AknsFrame<S>,
    flows: &Flows<S>,
    i: u32,
    j: u32,
    k: u32,
) -> Result<Report> {
    distinct_increasing(i, j, k)?;
    need_order(j + k + 1, frame.order())?;
    let mut report = Report::new("hamiltonian-closure", &[("i", i as i64), ("j", j as i64), ("k", k as i64)]);
    let mut sum = Poly::zero();
    for (d, a, b) in [(i, j, k), (k, i, j), (j, k, i)] {
        sum += &flows.apply(d, &hamiltonian_coeff(frame, a, b)?)?;
    }
    report.zero_poly("cyclic sum", &sum);
    Ok(report)
}

/// `dΩ = 0` on-shell for `Ω = Σ_t ω_t ∧ dx^t` over `times`.
pub fn omega_closure_check<S: Scalar>(frame: &AknsFrame<S>, flows: &Flows<S>, times: &[u32]) -> Result<Report> {
    let mut sorted = times.to_vec();
    sorted.sort();
    sorted.dedup();
    let params: Vec<(String, i64)> = sorted.iter().enumerate().map(|(n, t)| (format!("t{}", n + 1), *t as i64)).collect();
    let mut report = Report::new("omega-closure", &[]);
    report.params = params;
    let mut omega = VBForm::zero();
    for &t in &sorted {
        omega = &omega + &symplectic_coeff(frame, t)?.omega.wedge(&VBForm::dx(t));
    }
    let d = omega.horizontal_d(&sorted).onshell_reduce(flows)?;
    report.zero_form("d Omega", &d);
    Ok(report)
}

/// `ι_{∂̃_i} ω⁽¹⁾_j − ι_{∂̃_j} ω⁽¹⁾_i = K_ij` off-shell, and the Legendre
/// transform `H_ij = K_ij − L_ij` agrees with the trace formula.
pub fn legendre_check<S: Scalar>(frame: &AknsFrame<S>, i: u32, j: u32) -> Result<Report> {
    need_order(i + j + 1, frame.order())?;
    let mut report = Report::new("legendre", &[("i", i as i64), ("j", j as i64)]);
    let data = PhiData::new(frame, i.max(j) + 1)?;
    let contract = |a: u32, b: u32| -> Result<Poly<S>> {
        let f = data.omega1(b).vertical_lift_contract(a);
        Ok(f.coefficient([]))
    };
    let lifted = &contract(i, j)? - &contract(j, i)?;
    let k = &data.kinetic_trace(i, j + 1) - &data.kinetic_trace(j, i + 1);
    report.zero_poly("contraction - K", &(&lifted - &k));
    let legendre = &lifted - &lagrangian_coeff(frame, i, j)?;
    report.zero_poly("legendre H - trace H", &(&legendre - &hamiltonian_coeff(frame, i, j)?));
    Ok(report)
}

/// `δ(L_ij dx^{ij}) + d(ω⁽¹⁾_i ∧ dx^i + ω⁽¹⁾_j ∧ dx^j) = 0` on-shell.
pub fn verify_omega1<S: Scalar>(frame: &AknsFrame<S>, flows: &Flows<S>, i: u32, j: u32) -> Result<Report> {
    need_order(i + j + 1, frame.order())?;
    let mut report = Report::new("omega1", &[("i", i as i64), ("j", j as i64)]);
    let data = PhiData::new(frame, i.max(j) + 1)?;
    let mut times = [i, j];
    times.sort();
    let lag = two_form(lagrangian_coeff(frame, i, j)?, i, j);
    let omega1 = &data.omega1(i).wedge(&VBForm::dx(i)) + &data.omega1(j).wedge(&VBForm::dx(j));
    let sum = &lag.vertical_delta() + &omega1.horizontal_d(&times);
    report.zero_form("delta L + d Omega1", &sum.onshell_reduce(flows)?);
    Ok(report)
}

/// Conservation law `A_k = a_{k+1}`, `k ≤ n`.
pub fn conservation_form<S: Scalar>(frame: &AknsFrame<S>, n: u32) -> Result<HamOneForm<S>> {
    let comps = (0..=n).map(|k| frame.a_coeff(k + 1)).collect::<Result<Vec<_>>>()?;
    Ok(HamOneForm::new(comps))
}

/// `A` is a Hamiltonian 1-form, `D_i a_{j+1} = D_j a_{i+1}`,
/// `ι_{ξ_A} δH_ij = 0` and every `H_ij` is balanced, for `i, j ≤ n`.
pub fn conservation_check<S: Scalar>(frame: &AknsFrame<S>, flows: &Flows<S>, n: u32) -> Result<Report> {
    need_order(2 * n, frame.order())?;
    let mut report = Report::new("conservation", &[("n", n as i64)]);
    let a = conservation_form(frame, n)?;
    let Some(xi) = a.vector_field() else {
        report.fail("A", "not a Hamiltonian 1-form");
        return Ok(report);
    };
    for i in 0..=n {
        for j in i + 1..=n {
            let lhs = flows.apply(i, a.comp(j))?;
            let rhs = flows.apply(j, a.comp(i))?;
            report.zero_poly(format!("D{i} a{} - D{j} a{}", j + 1, i + 1), &(&lhs - &rhs));
            if i + j < frame.order() {
                let h = hamiltonian_coeff(frame, i, j)?;
                let contracted = VBForm::function(h.clone()).vertical_delta().interior(&xi);
                report.zero_form(format!("xi_A on delta H{i}{j}"), &contracted);
                report.ensure(format!("balance of H{i}{j}"), h.monomial_balance()?);
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::akns::{build_frame, QrChart};
    use crate::scalar::GaussianRational as G;

    type P = Poly<G>;

    fn c(s: &str) -> G {
        s.parse().unwrap()
    }

    fn e(j: u32) -> P {
        P::e(j)
    }

    fn f(j: u32) -> P {
        P::f(j)
    }

    #[test]
    fn hamiltonian_golden() {
        let fr = build_frame::<G>(6).unwrap();
        let h12 = &(&e(2) * &f(2)).scale(&c("-2i")) - &(&(&e(1) * &e(1)) * &(&f(1) * &f(1)));
        assert_eq!(hamiltonian_coeff(&fr, 1, 2).unwrap(), h12);
        assert_eq!(hamiltonian_coeff(&fr, 2, 1).unwrap(), -h12.clone());
        assert!(hamiltonian_coeff(&fr, 2, 2).unwrap().is_zero());
        for i in 0..=2 {
            for j in 0..=2 {
                assert_eq!(hamiltonian_coeff(&fr, i, j).unwrap(), potential_coeff(&fr, i, j).unwrap());
            }
        }
        assert!(matches!(hamiltonian_coeff(&fr, 3, 3), Err(Error::InsufficientOrder { required: 7, .. })));
    }

    #[test]
    fn darboux_small() {
        let fr = build_frame::<G>(5).unwrap();
        for k in 0..=4 {
            let r = verify_darboux(&fr, k).unwrap();
            assert!(r.passed(), "{r}");
        }
        assert!(symplectic_coeff(&fr, 0).unwrap().omega.is_zero());
    }

    #[test]
    fn omega1_matches_explicit_formula() {
        let fr = build_frame::<G>(5).unwrap();
        for k in 1..=4 {
            let w = symplectic_coeff(&fr, k).unwrap().omega1;
            let mut expect = VBForm::zero();
            for m in 1..=k {
                expect = &expect + &VBForm::term(f(m).scale(&c("1/2")), [Leg::Delta(Variable::e(k + 1 - m))]);
                expect = &expect - &VBForm::term(e(m).scale(&c("1/2")), [Leg::Delta(Variable::f(k + 1 - m))]);
            }
            assert_eq!(w, expect, "k = {k}");
        }
    }

    #[test]
    fn nls_lagrangian() {
        let fr = build_frame::<G>(5).unwrap();
        let chart = QrChart::new(&fr).unwrap();
        let l = chart.ef_to_qr(&lagrangian_coeff(&fr, 1, 2).unwrap()).unwrap();
        let q = |n: u32| P::var(Variable::q_x(n));
        let r = |n: u32| P::var(Variable::r_x(n));
        let q2 = P::var(Variable::q().raised(2));
        let r2 = P::var(Variable::r().raised(2));
        let expect = &(&(&(&q2 * &r(0)) - &(&q(0) * &r2)).scale(&c("1/4i"))
            + &(&(&r(0) * &q(2)) + &(&q(0) * &r(2))).scale(&c("1/8")))
            - &(&(&q(0) * &q(0)) * &(&r(0) * &r(0))).scale(&c("1/4"));
        assert_eq!(l, expect);
    }

    #[test]
    fn small_checks() {
        let fr = build_frame::<G>(6).unwrap();
        let flows = Flows::derive(&fr, 0..=3).unwrap();
        assert!(legendre_check(&fr, 1, 2).unwrap().passed());
        let r = verify_omega1(&fr, &flows, 1, 2).unwrap();
        assert!(r.passed(), "{r}");
        let r = multiform_el(&fr, &flows, 1, 2).unwrap();
        assert!(r.passed(), "{r}");
        let r = closure_check(&fr, &flows, 1, 2, 3).unwrap();
        assert!(r.passed(), "{r}");
        let r = omega_closure_check(&fr, &flows, &[1, 2, 3]).unwrap();
        assert!(r.passed(), "{r}");
        let r = conservation_check(&fr, &flows, 3).unwrap();
        assert!(r.passed(), "{r}");
        assert!(closure_check(&fr, &flows, 2, 1, 3).is_err());
    }
}
