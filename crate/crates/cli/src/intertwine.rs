use std::time::Instant;

use serde::Serialize;

use dunkl_lab::intertwine::{v_a_limit, v_a_on_monomial, v_b_limit_beta, v_b_limit_nu, v_b_on_monomial};
use dunkl_lab::symfunc::{Basis, Partition, SymPoly};

use crate::args::{BasisArg, IntertwineArgs, LimitArg, RootType};
use crate::error::{CliError, CliResult};
use crate::manifest::{emit_json, Output, RunManifest};
use crate::root_config;

#[derive(Serialize)]
struct IntertwineParameters {
    root_type: RootType,
    lambda: Vec<usize>,
    n: usize,
    beta: f64,
    nu: Option<f64>,
    basis: BasisArg,
    limit: LimitArg,
}

#[derive(Serialize)]
struct Term {
    partition: Vec<usize>,
    coefficient: f64,
}

#[derive(Serialize)]
struct Table {
    /// What is expanded, e.g. `V m_(2)` or `lim β^k V m_(2)`.
    quantity: String,
    basis: String,
    /// `x` for type A; type-B polynomials are in the squared variables.
    variables: &'static str,
    terms: Vec<Term>,
}

fn table(quantity: String, poly: &SymPoly, variables: &'static str) -> Table {
    let basis = match poly.basis {
        Basis::Monomial => "monomial".to_string(),
        Basis::Jack(alpha) => format!("jack(alpha={alpha})"),
    };
    let terms = poly
        .coeffs
        .iter()
        .map(|(p, &c)| Term { partition: p.parts().to_vec(), coefficient: c })
        .collect();
    Table { quantity, basis, variables, terms }
}

fn compute(args: &IntertwineArgs) -> CliResult<Table> {
    let lambda = Partition::new(args.lambda.0.clone());
    // validates β, ν and the type/ν combination
    root_config(args.root_type, args.n.max(1), args.beta, args.nu)?;
    if args.limit != LimitArg::None && args.basis == BasisArg::Jack {
        return Err(CliError::Usage("limits are tabulated in the monomial basis only".into()));
    }
    let k = lambda.weight();
    let vars = if args.root_type == RootType::A { "x" } else { "x^2" };
    let poly = match (args.root_type, args.limit) {
        (RootType::A, LimitArg::None) => v_a_on_monomial(&lambda, args.n, args.beta)?,
        (RootType::B, LimitArg::None) => {
            v_b_on_monomial(&lambda, args.n, args.beta, args.nu.unwrap_or_default())?
        }
        (RootType::A, LimitArg::Beta) => {
            return Ok(table(format!("lim_beta V m_{lambda}"), &v_a_limit(&lambda, args.n)?, vars));
        }
        (RootType::A, LimitArg::Nu) => return Err(CliError::Usage("--limit nu only applies to type B".into())),
        (RootType::B, LimitArg::Beta) => {
            let p = v_b_limit_beta(&lambda, args.n, args.nu.unwrap_or_default())?;
            return Ok(table(format!("lim_beta beta^{k} V m_{lambda}"), &p, vars));
        }
        (RootType::B, LimitArg::Nu) => {
            let p = v_b_limit_nu(&lambda, args.n, args.beta)?;
            return Ok(table(format!("lim_nu nu^{k} V m_{lambda}"), &p, vars));
        }
    };
    let poly = match args.basis {
        BasisArg::Jack => poly,
        BasisArg::Monomial => poly.to_monomial()?,
    };
    Ok(table(format!("V m_{lambda}"), &poly, vars))
}

pub fn run(args: IntertwineArgs) -> CliResult<()> {
    let started = Instant::now();
    let report = compute(&args)?;
    let params = IntertwineParameters {
        root_type: args.root_type,
        lambda: args.lambda.0.clone(),
        n: args.n,
        beta: args.beta,
        nu: args.nu,
        basis: args.basis,
        limit: args.limit,
    };
    let out = Output { manifest: RunManifest::new("intertwine", params, None, started), report };
    emit_json(&out, None)
}
