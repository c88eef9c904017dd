//! Planning and running verification checks.
//!
//! Each task gets one frame (and flows) at the largest order any of its
//! items needs; items then run in parallel and records are sorted.

use std::time::Instant;

use rayon::prelude::*;

use akns_multiform::akns::flow_commute_check;
use akns_multiform::multiform::{
    auxiliary_time, closure_check, conservation_check, el_order, hamiltonian_closure_check, legendre_check,
    multiform_el, omega_closure_check, verify_darboux, verify_omega1,
};
use akns_multiform::poisson::{default_jacobi_triples, jacobi_check, pb_lemma_check, rmatrix_check, zc_hamiltonian_check};
use akns_multiform::{build_frame, AknsFrame, Flows, Report};

use crate::record::{self, CheckRecord};
use crate::{Check, UsageError, VerifyArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Task {
    Darboux,
    Closure,
    HamiltonianClosure,
    OmegaClosure,
    El,
    Legendre,
    Omega1,
    Rmatrix,
    PbLemma,
    ZcHamiltonian,
    Conservation,
    Jacobi,
    FlowCommute,
}

impl Task {
    /// Order needed by one item, and the flow times it uses.
    fn needs(self, idx: &[u32]) -> (u32, Vec<u32>) {
        match (self, idx) {
            (Task::Darboux, [k]) => (k + 1, vec![]),
            (Task::Closure, [i, j, k]) => (i + j + k, (1..=*k).collect()),
            (Task::HamiltonianClosure, [_, j, k]) => (j + k + 1, (0..=*k).collect()),
            (Task::OmegaClosure, [_, _, k]) => (2 * k, (1..=*k).collect()),
            (Task::El, [i, j]) => (el_order(*i, *j), (1..=*i.max(j).max(&auxiliary_time(*i, *j))).collect()),
            (Task::Legendre, [i, j]) => (i + j + 1, vec![]),
            (Task::Omega1, [i, j]) => (i + j + 1, (1..=*i.max(j)).collect()),
            (Task::Rmatrix | Task::PbLemma, [k]) => ((*k).max(1), vec![]),
            (Task::ZcHamiltonian, [i, j]) => (i + j + 1, (0..=*i.max(j)).collect()),
            (Task::Conservation, [n]) => ((2 * n).max(1), (0..=*n).collect()),
            (Task::Jacobi, [t]) => (t + 1, vec![]),
            (Task::FlowCommute, [j, k, m]) => (m + j + k, vec![*j, *k]),
            _ => unreachable!("item arity matches its task"),
        }
    }

    fn run(self, frame: &AknsFrame, flows: &Flows, idx: &[u32]) -> akns_multiform::Result<Vec<Report>> {
        let one = |r: akns_multiform::Result<Report>| r.map(|r| vec![r]);
        match (self, idx) {
            (Task::Darboux, [k]) => one(verify_darboux(frame, *k)),
            (Task::Closure, [i, j, k]) => one(closure_check(frame, flows, *i, *j, *k)),
            (Task::HamiltonianClosure, [i, j, k]) => one(hamiltonian_closure_check(frame, flows, *i, *j, *k)),
            (Task::OmegaClosure, times) => one(omega_closure_check(frame, flows, times)),
            (Task::El, [i, j]) => one(multiform_el(frame, flows, *i, *j)),
            (Task::Legendre, [i, j]) => one(legendre_check(frame, *i, *j)),
            (Task::Omega1, [i, j]) => one(verify_omega1(frame, flows, *i, *j)),
            (Task::Rmatrix, [k]) => one(rmatrix_check(frame, *k)),
            (Task::PbLemma, [k]) => one(pb_lemma_check(frame, *k)),
            (Task::ZcHamiltonian, [i, j]) => one(zc_hamiltonian_check(frame, flows, *i, *j)),
            (Task::Conservation, [n]) => one(conservation_check(frame, flows, *n)),
            (Task::Jacobi, [t]) => default_jacobi_triples(frame, *t)?
                .into_iter()
                .map(|(label, [f, g, k])| {
                    let mut r = jacobi_check(&label, &f, &g, &k)?;
                    r.params = vec![("max_time".into(), *t as i64)];
                    Ok(r)
                })
                .collect(),
            (Task::FlowCommute, [j, k, m]) => one(flow_commute_check(flows, *j, *k, *m)),
            _ => unreachable!("item arity matches its task"),
        }
    }
}

struct Plan {
    task: Task,
    items: Vec<Vec<u32>>,
}

fn pairs(lo: u32, hi: u32) -> Vec<Vec<u32>> {
    (lo..=hi).flat_map(|i| (i + 1..=hi).map(move |j| vec![i, j])).collect()
}

fn triples(lo: u32, hi: u32) -> Vec<Vec<u32>> {
    (lo..=hi)
        .flat_map(|i| (i + 1..=hi).flat_map(move |j| (j + 1..=hi).map(move |k| vec![i, j, k])))
        .collect()
}

fn explicit_pair(args: &VerifyArgs, name: &str) -> Result<Option<Vec<u32>>, UsageError> {
    match (args.i, args.j) {
        (None, None) => Ok(None),
        (Some(i), Some(j)) => Ok(Some(vec![i, j])),
        _ => Err(UsageError(format!("{name} needs --i and --j together"))),
    }
}

fn single(args: &VerifyArgs) -> Option<u32> {
    args.k.or(args.time)
}

fn plans(check: Check, args: &VerifyArgs) -> Result<Vec<Plan>, UsageError> {
    let n = args.max_time;
    let plan = |task, items| Plan { task, items };
    Ok(match check {
        Check::Darboux => {
            let items = match single(args) {
                Some(k) => vec![vec![k]],
                None => (0..=2 * n).map(|k| vec![k]).collect(),
            };
            vec![plan(Task::Darboux, items)]
        }
        Check::Closure => match (args.i, args.j, args.k) {
            (None, None, None) => vec![
                plan(Task::Closure, triples(1, n + 1)),
                plan(Task::HamiltonianClosure, triples(0, n)),
                plan(Task::OmegaClosure, triples(1, n)),
            ],
            (Some(i), Some(j), Some(k)) => {
                let t = vec![vec![i, j, k]];
                let mut out = vec![plan(Task::HamiltonianClosure, t.clone())];
                if i >= 1 {
                    out.push(plan(Task::Closure, t.clone()));
                    out.push(plan(Task::OmegaClosure, t));
                }
                out
            }
            _ => return Err(UsageError("closure needs --i, --j and --k together".into())),
        },
        Check::El | Check::Legendre | Check::Omega1 => {
            let task = match check {
                Check::El => Task::El,
                Check::Legendre => Task::Legendre,
                _ => Task::Omega1,
            };
            let items = explicit_pair(args, "this check")?.map_or_else(|| pairs(1, n), |p| vec![p]);
            vec![plan(task, items)]
        }
        Check::Rmatrix | Check::PbLemma => {
            let task = if check == Check::Rmatrix { Task::Rmatrix } else { Task::PbLemma };
            let items = match single(args) {
                Some(k) => vec![vec![k]],
                None => (0..=n + 2).map(|k| vec![k]).collect(),
            };
            vec![plan(task, items)]
        }
        Check::ZcHamiltonian => {
            let items = explicit_pair(args, "zc-hamiltonian")?.map_or_else(|| pairs(0, n + 1), |p| vec![p]);
            vec![plan(Task::ZcHamiltonian, items)]
        }
        Check::Conservation => vec![plan(Task::Conservation, vec![vec![args.k.unwrap_or(n + 2)]])],
        Check::Jacobi => vec![plan(Task::Jacobi, vec![vec![n]])],
        Check::FlowCommute => {
            let m = args.k.unwrap_or(n + 2);
            let items = match explicit_pair(args, "flow-commute")? {
                Some(p) => vec![vec![p[0], p[1], m]],
                None => pairs(1, n).into_iter().map(|p| vec![p[0], p[1], m]).collect(),
            };
            vec![plan(Task::FlowCommute, items)]
        }
        Check::All => {
            if args.i.is_some() || args.j.is_some() || args.k.is_some() || args.time.is_some() {
                return Err(UsageError("`verify all` takes no index flags".into()));
            }
            let every = [
                Check::Darboux,
                Check::Closure,
                Check::El,
                Check::Legendre,
                Check::Omega1,
                Check::Rmatrix,
                Check::PbLemma,
                Check::ZcHamiltonian,
                Check::Conservation,
                Check::Jacobi,
                Check::FlowCommute,
            ];
            let mut out = Vec::new();
            for c in every {
                out.extend(plans(c, args)?);
            }
            out
        }
    })
}

struct Context {
    task: Task,
    frame: AknsFrame,
    flows: Flows,
    items: Vec<Vec<u32>>,
}

fn prepare(plan: Plan, order_override: Option<u32>) -> Result<Context, UsageError> {
    let mut order = 1;
    let mut times: Vec<u32> = Vec::new();
    for item in &plan.items {
        let (o, t) = plan.task.needs(item);
        order = order.max(o);
        times.extend(t);
    }
    times.sort();
    times.dedup();
    let order = match order_override {
        Some(o) if o < order => {
            return Err(UsageError(format!("--order {o} is too small for this request, the minimum is {order}")))
        }
        Some(o) => o,
        None => order,
    };
    let frame = build_frame(order)?;
    let flows = Flows::derive(&frame, times)?;
    Ok(Context { task: plan.task, frame, flows, items: plan.items })
}

pub fn verify(args: &VerifyArgs) -> Result<Vec<CheckRecord>, UsageError> {
    let plans = plans(args.check, args)?;
    let mut records = Vec::new();
    if args.check == Check::Jacobi || args.check == Check::All {
        if args.max_time < 2 {
            records.push(CheckRecord::skipped("jacobi A,W+,H12", vec![("max_time".into(), args.max_time as i64)]));
        }
    }
    let contexts: Vec<Context> = plans
        .into_par_iter()
        .map(|p| prepare(p, args.order))
        .collect::<Result<_, _>>()?;
    let jobs: Vec<(&Context, &Vec<u32>)> = contexts.iter().flat_map(|c| c.items.iter().map(move |i| (c, i))).collect();
    let results: Vec<Vec<CheckRecord>> = jobs
        .into_par_iter()
        .map(|(ctx, item)| {
            let start = Instant::now();
            let reports = ctx.task.run(&ctx.frame, &ctx.flows, item)?;
            let millis = start.elapsed().as_millis() as u64;
            Ok(reports.into_iter().map(|r| CheckRecord::from_report(r, millis)).collect())
        })
        .collect::<Result<_, UsageError>>()?;
    records.extend(results.into_iter().flatten());
    record::sort(&mut records);
    Ok(records)
}
