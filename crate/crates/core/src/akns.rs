//! The AKNS phase space in the `e`, `f` coordinates.
//!
//! [`AknsFrame`] holds the series `e(λ) = Σ e_j z^j`, `f(λ) = Σ f_j z^j`,
//! the root `s = √(2i − ef)` normalized by `s(0) = 1 + i`, and
//!
//! ```text
//! a = ef − i,   b = e·s,   c = f·s,   Q = [[a, b], [c, −a]],
//! φ = (1/(1+i)) [[s, e], [−f, s]],
//! ```
//!
//! all truncated at `z^M`. Flows `∂_k Q = [Q^(k), Q]` are transported to
//! `e`, `f` through `∂e = ∂b/s + b ∂a/(2 s³)` and stored per time in a
//! [`FlowTable`]; [`Flows`] also performs on-shell reduction of jets.

use std::collections::{BTreeMap, HashMap};

use crate::error::{need_order, Error, Result};
use crate::poly::{Kind, Poly, Variable};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::series::{Mat2, MatrixSeries, TruncSeries};

#[derive(Clone, Debug)]
pub struct AknsFrame<S: Scalar> {
    order: u32,
    pub e: TruncSeries<S>,
    pub f: TruncSeries<S>,
    /// `s = √(2i − ef) = √(i − a)`.
    pub root: TruncSeries<S>,
    pub a: TruncSeries<S>,
    pub b: TruncSeries<S>,
    pub c: TruncSeries<S>,
    pub q: MatrixSeries<S>,
    pub phi: MatrixSeries<S>,
    root_inv: TruncSeries<S>,
    root_inv3: TruncSeries<S>,
}

/// Build the frame at truncation order `m ≥ 1`.
pub fn build_frame<S: Scalar>(m: u32) -> Result<AknsFrame<S>> {
    if m == 0 {
        return Err(Error::Precondition("truncation order must be at least 1".into()));
    }
    let n = m as i64;
    let e = TruncSeries::from_fn(1, n, |j| Poly::e(j as u32));
    let f = TruncSeries::from_fn(1, n, |j| Poly::f(j as u32));
    let ef = e.mul(&f).truncate(n);
    let i = S::imag_unit();
    let two_i = i.clone() + i.clone();
    let u = TruncSeries::constant(Poly::constant(two_i)).sub(&ef);
    let root = u.sqrt(&S::sqrt_two_i())?;
    let a = ef.sub(&TruncSeries::constant(Poly::constant(i)));
    let b = e.mul(&root).truncate(n);
    let c = f.mul(&root).truncate(n);
    let q = MatrixSeries::new([[a.clone(), b.clone()], [c.clone(), a.neg()]]);
    let norm = S::sqrt_two_i().checked_inv().ok_or(Error::DivisionByZero)?;
    let phi = MatrixSeries::new([[root.clone(), e.clone()], [f.neg(), root.clone()]]).scale_scalar(&norm);
    let root_inv = root.invert()?;
    let root_inv3 = root_inv.mul(&root_inv).mul(&root_inv);
    Ok(AknsFrame { order: m, e, f, root, a, b, c, q, phi, root_inv, root_inv3 })
}

impl<S: Scalar> AknsFrame<S> {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficient `Q_k` of `Q(λ) = Σ Q_k λ^(-k)`.
    pub fn q_coeff(&self, k: u32) -> Result<Mat2<S>> {
        need_order(k, self.order)?;
        self.q.coeff(k as i64)
    }

    pub fn a_coeff(&self, k: u32) -> Result<Poly<S>> {
        need_order(k, self.order)?;
        self.a.coeff(k as i64)
    }

    pub fn b_coeff(&self, k: u32) -> Result<Poly<S>> {
        need_order(k, self.order)?;
        self.b.coeff(k as i64)
    }

    pub fn c_coeff(&self, k: u32) -> Result<Poly<S>> {
        need_order(k, self.order)?;
        self.c.coeff(k as i64)
    }

    /// `Q^(k)(λ) = P₊(λ^k Q(λ))` as an exact matrix series.
    pub fn lax_matrix(&self, k: u32) -> Result<MatrixSeries<S>> {
        need_order(k, self.order)?;
        self.q.plus_projection(k as i64)
    }

    /// `Q^(k)` as a matrix polynomial in the spectral variable `var`.
    pub fn lax_poly(&self, k: u32, var: &Variable) -> Result<Mat2<S>> {
        self.lax_matrix(k)?.to_poly_in(var)
    }

    /// `∂_k e_j`, `∂_k f_j` for `j ≤ max_index`.
    pub fn derive_flow(&self, k: u32, max_index: u32) -> Result<FlowTable<S>> {
        need_order(k + max_index, self.order)?;
        let dq = self.lax_matrix(k)?.commutator(&self.q);
        let (da, db, dc) = (dq.entry(0, 0), dq.entry(0, 1), dq.entry(1, 0));
        let half = S::from_ratio(1, 2);
        let transport = |dx: &TruncSeries<S>, x: &TruncSeries<S>| {
            dx.mul(&self.root_inv)
                .add(&x.mul(&self.root_inv3).mul(da).scale_scalar(&half))
        };
        let de = transport(db, &self.b);
        let df = transport(dc, &self.c);
        let collect = |s: &TruncSeries<S>| -> Result<Vec<Poly<S>>> {
            (1..=max_index as i64).map(|j| s.coeff(j)).collect()
        };
        Ok(FlowTable { time: k, de: collect(&de)?, df: collect(&df)? })
    }
}

/// The derivation `∂_k` on the phase coordinates `e_j`, `f_j`, `j ≤ J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowTable<S: Scalar> {
    time: u32,
    de: Vec<Poly<S>>,
    df: Vec<Poly<S>>,
}

impl<S: Scalar> FlowTable<S> {
    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn max_index(&self) -> u32 {
        self.de.len() as u32
    }

    fn lookup<'a>(&self, table: &'a [Poly<S>], j: u32) -> Result<&'a Poly<S>> {
        if j == 0 || j > self.max_index() {
            return Err(Error::FlowIndex { time: self.time, max: self.max_index(), needed: j });
        }
        Ok(&table[j as usize - 1])
    }

    pub fn de(&self, j: u32) -> Result<&Poly<S>> {
        self.lookup(&self.de, j)
    }

    pub fn df(&self, j: u32) -> Result<&Poly<S>> {
        self.lookup(&self.df, j)
    }

    fn image(&self, v: &Variable) -> Result<Option<Poly<S>>> {
        match v.kind {
            Kind::Spectral => Ok(None),
            Kind::E | Kind::F if v.jet.is_empty() => {
                let img = if v.kind == Kind::E { self.de(v.index)? } else { self.df(v.index)? };
                Ok(Some(img.clone()))
            }
            _ => Err(Error::Precondition(format!(
                "flow derivation acts on phase coordinates only, found `{v}`"
            ))),
        }
    }

    /// Apply `∂_k` to a polynomial in `e_j`, `f_j` (and spectral parameters).
    pub fn apply(&self, p: &Poly<S>) -> Result<Poly<S>> {
        p.derivation(|v| self.image(v))
    }

    pub fn apply_mat(&self, m: &Mat2<S>) -> Result<Mat2<S>> {
        m.try_map(|p| self.apply(p))
    }
}

/// Flow tables for a set of times, each as deep as the frame allows.
#[derive(Clone, Debug)]
pub struct Flows<S: Scalar> {
    tables: BTreeMap<u32, FlowTable<S>>,
}

impl<S: Scalar> Flows<S> {
    /// Tables for `times`, each with `J = M − k`.
    pub fn derive(frame: &AknsFrame<S>, times: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut tables = BTreeMap::new();
        for k in times {
            need_order(k, frame.order())?;
            tables.insert(k, frame.derive_flow(k, frame.order() - k)?);
        }
        Ok(Flows { tables })
    }

    pub fn from_tables(tables: impl IntoIterator<Item = FlowTable<S>>) -> Self {
        Flows { tables: tables.into_iter().map(|t| (t.time, t)).collect() }
    }

    pub fn table(&self, k: u32) -> Result<&FlowTable<S>> {
        self.tables.get(&k).ok_or(Error::MissingFlow(k))
    }

    pub fn times(&self) -> impl Iterator<Item = u32> + '_ {
        self.tables.keys().copied()
    }

    pub fn apply(&self, k: u32, p: &Poly<S>) -> Result<Poly<S>> {
        self.table(k)?.apply(p)
    }

    pub fn apply_mat(&self, k: u32, m: &Mat2<S>) -> Result<Mat2<S>> {
        self.table(k)?.apply_mat(m)
    }

    /// On-shell value of a jet of `e_j`/`f_j`:
    /// `v^(α + t) ↦ ∂_t (reduce v^α)`.
    pub fn reduce_var(&self, v: &Variable, cache: &mut HashMap<Variable, Poly<S>>) -> Result<Poly<S>> {
        if let Some(p) = cache.get(v) {
            return Ok(p.clone());
        }
        let out = match v.kind {
            Kind::Spectral => Poly::var(v.clone()),
            Kind::Q | Kind::R => {
                return Err(Error::Precondition(format!(
                    "on-shell reduction works in e/f coordinates, found `{v}`"
                )))
            }
            Kind::E | Kind::F => match v.jet.last_time() {
                None => Poly::var(v.clone()),
                Some(t) => {
                    let lower = v.clone().with_jet(v.jet.lowered(t).expect("time present"));
                    let inner = self.reduce_var(&lower, cache)?;
                    self.apply(t, &inner)?
                }
            },
        };
        cache.insert(v.clone(), out.clone());
        Ok(out)
    }

    /// Replace every jet variable by its on-shell value.
    pub fn reduce(&self, p: &Poly<S>) -> Result<Poly<S>> {
        let mut cache = HashMap::new();
        self.reduce_with(p, &mut cache)
    }

    pub fn reduce_with(&self, p: &Poly<S>, cache: &mut HashMap<Variable, Poly<S>>) -> Result<Poly<S>> {
        p.substitute(|v| {
            if v.is_jet() || matches!(v.kind, Kind::Q | Kind::R) {
                self.reduce_var(v, cache).map(Some)
            } else {
                Ok(None)
            }
        })
    }
}

/// `D_j D_k v = D_k D_j v` for `v ∈ {e_m, f_m}`, `m ≤ max_index`.
pub fn flow_commute_check<S: Scalar>(flows: &Flows<S>, j: u32, k: u32, max_index: u32) -> Result<Report> {
    let mut report = Report::new("flow-commute", &[("j", j as i64), ("k", k as i64), ("m", max_index as i64)]);
    for m in 1..=max_index {
        for v in [Poly::e(m), Poly::f(m)] {
            let jk = flows.apply(j, &flows.apply(k, &v)?)?;
            let kj = flows.apply(k, &flows.apply(j, &v)?)?;
            report.zero_poly(format!("[D{j}, D{k}] {v}"), &(&jk - &kj));
        }
    }
    Ok(report)
}

/// The frame together with flows for times `0..=max_time`.
#[derive(Clone, Debug)]
pub struct Hierarchy<S: Scalar> {
    pub frame: AknsFrame<S>,
    pub flows: Flows<S>,
}

impl<S: Scalar> Hierarchy<S> {
    pub fn new(order: u32, max_time: u32) -> Result<Self> {
        need_order(max_time, order)?;
        let frame = build_frame(order)?;
        let flows = Flows::derive(&frame, 0..=max_time)?;
        Ok(Hierarchy { frame, flows })
    }

    pub fn order(&self) -> u32 {
        self.frame.order()
    }
}

/// Direction of a [`QrChart`] conversion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartDirection {
    EfToQr,
    QrToEf,
}

/// The change of coordinates between `e_j`, `f_j` and the `x¹` jets of
/// `q = b₁`, `r = c₁`, generated by solving the `x¹` flow recursion.
#[derive(Clone, Debug)]
pub struct QrChart<S: Scalar> {
    order: u32,
    /// `e_j`, `f_j` in terms of `q`, `r` jets, `j = 1..=M`.
    e_qr: Vec<Poly<S>>,
    f_qr: Vec<Poly<S>>,
    /// `q_(1^n)`, `r_(1^n)` in terms of `e`, `f`, `n = 0..M`.
    q_ef: Vec<Poly<S>>,
    r_ef: Vec<Poly<S>>,
}

impl<S: Scalar> QrChart<S> {
    pub fn new(frame: &AknsFrame<S>) -> Result<Self> {
        let m = frame.order();
        let flow = frame.derive_flow(1, m - 1)?;
        let root = S::sqrt_two_i();
        let root_inv = root.checked_inv().ok_or(Error::DivisionByZero)?;
        let mut q_ef = vec![Poly::e(1).scale(&root)];
        let mut r_ef = vec![Poly::f(1).scale(&root)];
        for n in 1..m as usize {
            q_ef.push(flow.apply(&q_ef[n - 1])?);
            r_ef.push(flow.apply(&r_ef[n - 1])?);
        }
        // q_(1^n) = √(2i)((−2i)^n e_(n+1) + lower terms); solve for e_(n+1).
        let i = S::imag_unit();
        let mut e_qr: Vec<Poly<S>> = Vec::new();
        let mut f_qr: Vec<Poly<S>> = Vec::new();
        for n in 0..m as usize {
            let lead_e = (-(i.clone() + i.clone())).pow(n as u32);
            let lead_f = (i.clone() + i.clone()).pow(n as u32);
            let top = Variable::e(n as u32 + 1);
            let lower_e = &q_ef[n].scale(&root_inv) - &Poly::var(top.clone()).scale(&lead_e);
            let lower_f = &r_ef[n].scale(&root_inv) - &Poly::f(n as u32 + 1).scale(&lead_f);
            let known = |v: &Variable| -> Result<Option<Poly<S>>> {
                match v.kind {
                    Kind::E if v.index as usize <= e_qr.len() => Ok(Some(e_qr[v.index as usize - 1].clone())),
                    Kind::F if v.index as usize <= f_qr.len() => Ok(Some(f_qr[v.index as usize - 1].clone())),
                    _ => Err(Error::Chart(format!("x¹ recursion is not triangular at `{v}`"))),
                }
            };
            let rest_e = lower_e.substitute(known)?;
            let rest_f = lower_f.substitute(known)?;
            let qn = Poly::var(Variable::q_x(n as u32)).scale(&root_inv);
            let rn = Poly::var(Variable::r_x(n as u32)).scale(&root_inv);
            let inv_e = lead_e.checked_inv().ok_or(Error::DivisionByZero)?;
            let inv_f = lead_f.checked_inv().ok_or(Error::DivisionByZero)?;
            e_qr.push((&qn - &rest_e).scale(&inv_e));
            f_qr.push((&rn - &rest_f).scale(&inv_f));
        }
        Ok(QrChart { order: m, e_qr, f_qr, q_ef, r_ef })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// The image of one variable.
    pub fn image(&self, v: &Variable, direction: ChartDirection) -> Result<Option<Poly<S>>> {
        match (direction, v.kind) {
            (_, Kind::Spectral) => Ok(None),
            (ChartDirection::EfToQr, Kind::E | Kind::F) => {
                let table = if v.kind == Kind::E { &self.e_qr } else { &self.f_qr };
                let base = table.get(v.index as usize - 1).ok_or_else(|| {
                    Error::Chart(format!("`{v}` is beyond the chart order {}", self.order))
                })?;
                let mut out = base.clone();
                for &(t, count) in v.jet.pairs() {
                    for _ in 0..count {
                        out = out.total_derivative(t);
                    }
                }
                Ok(Some(out))
            }
            (ChartDirection::QrToEf, Kind::Q | Kind::R) => {
                let n = v.jet.count(1);
                if v.jet.order() != n {
                    return Err(Error::Chart(format!(
                        "`{v}` has derivatives in times other than x¹"
                    )));
                }
                let table = if v.kind == Kind::Q { &self.q_ef } else { &self.r_ef };
                let img = table.get(n as usize).ok_or_else(|| {
                    Error::Chart(format!("`{v}` is beyond the chart order {}", self.order))
                })?;
                Ok(Some(img.clone()))
            }
            _ => Ok(None),
        }
    }

    pub fn convert(&self, p: &Poly<S>, direction: ChartDirection) -> Result<Poly<S>> {
        p.substitute(|v| self.image(v, direction))
    }

    pub fn ef_to_qr(&self, p: &Poly<S>) -> Result<Poly<S>> {
        self.convert(p, ChartDirection::EfToQr)
    }

    pub fn qr_to_ef(&self, p: &Poly<S>) -> Result<Poly<S>> {
        self.convert(p, ChartDirection::QrToEf)
    }
}

/// One-shot chart conversion at order `m`.
pub fn qr_chart<S: Scalar>(p: &Poly<S>, direction: ChartDirection, m: u32) -> Result<Poly<S>> {
    let frame = build_frame(m)?;
    QrChart::new(&frame)?.convert(p, direction)
}
