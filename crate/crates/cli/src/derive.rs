use akns_multiform::multiform::{hamiltonian_coeff, lagrangian_coeff, symplectic_coeff};
use akns_multiform::{build_frame, ChartDirection, Kind, Poly, QrChart, Variable};

use crate::{Coords, DeriveArgs, Quantity, UsageError};

fn need(name: &str, v: Option<u32>) -> Result<u32, UsageError> {
    v.ok_or_else(|| UsageError(format!("missing --{name}")))
}

fn phase_var(raw: &str) -> Result<Variable, UsageError> {
    let v: Variable = raw.parse()?;
    if !(v.is_phase() && matches!(v.kind, Kind::E | Kind::F)) {
        return Err(UsageError(format!("--var must be a phase coordinate e_j or f_j, got `{raw}`")));
    }
    Ok(v)
}

/// Smallest truncation order that serves the request.
pub fn minimum_order(args: &DeriveArgs) -> Result<u32, UsageError> {
    Ok(match args.quantity {
        Quantity::Lagrangian | Quantity::Hamiltonian => need("i", args.i)? + need("j", args.j)? + 1,
        Quantity::Omega => need("k", args.k)? + 1,
        Quantity::Flow => phase_var(args.var.as_deref().ok_or_else(|| UsageError("missing --var".into()))?)?.index
            + need("time", args.time)?,
        Quantity::Lax => need("time", args.time.or(args.k))?.max(1),
    })
}

pub fn derive(args: &DeriveArgs) -> Result<String, UsageError> {
    let minimum = minimum_order(args)?;
    let order = match args.order {
        Some(o) if o < minimum => {
            return Err(UsageError(format!("--order {o} is too small for this request, the minimum is {minimum}")))
        }
        Some(o) => o,
        None => minimum,
    };
    let frame = build_frame(order)?;
    let chart = match args.coords {
        Coords::Ef => None,
        Coords::Qr => Some(QrChart::new(&frame)?),
    };
    let convert = |p: &Poly| -> Result<Poly, UsageError> {
        match &chart {
            None => Ok(p.clone()),
            Some(c) => Ok(c.ef_to_qr(p)?),
        }
    };
    Ok(match args.quantity {
        Quantity::Lagrangian => convert(&lagrangian_coeff(&frame, need("i", args.i)?, need("j", args.j)?)?)?.to_string(),
        Quantity::Hamiltonian => convert(&hamiltonian_coeff(&frame, need("i", args.i)?, need("j", args.j)?)?)?.to_string(),
        Quantity::Omega => {
            let omega = symplectic_coeff(&frame, need("k", args.k)?)?.omega;
            match &chart {
                None => omega.to_string(),
                Some(c) => omega.pull_back(|v| c.image(v, ChartDirection::EfToQr))?.to_string(),
            }
        }
        Quantity::Flow => {
            let var = phase_var(args.var.as_deref().unwrap_or_default())?;
            let t = need("time", args.time)?;
            let table = frame.derive_flow(t, var.index)?;
            let image = if var.kind == Kind::E { table.de(var.index)? } else { table.df(var.index)? };
            convert(image)?.to_string()
        }
        Quantity::Lax => {
            let m = frame.lax_poly(need("time", args.time.or(args.k))?, &Variable::lambda())?;
            let mut lines = Vec::new();
            for r in 0..2 {
                for c in 0..2 {
                    lines.push(format!("[{}{}] {}", r + 1, c + 1, convert(m.get(r, c))?));
                }
            }
            lines.join("\n")
        }
    })
}
