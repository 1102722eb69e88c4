use std::process::ExitCode;

use iontrap::atomic::{IonDatabase, TransitionCase};
use iontrap::bounds::{
    bound_metastable, bound_qec_metastable, bound_qec_raman, bound_raman, bound_raman_naive, floor_bits,
    raman_regime, raman_time_lower_bound, required_rabi_ratio, total_time, BoundScenario, Encoding, LeakBranch,
    QecOverheads, RamanBeta,
};
use serde::Serialize;

use crate::cli::{BetaArg, BoundArgs, CaseArg, EncodingArg, Format, LeakArg};
use crate::config::FileConfig;
use crate::output::{g6, to_json_6};
use crate::{parse_enum, pick, CliError};

#[derive(Debug, Serialize)]
struct BoundOutput {
    ion: Option<String>,
    encoding: Option<Encoding>,
    case: Option<TransitionCase>,
    eta: Option<f64>,
    epsilon: f64,
    qec: Option<QecOverheads>,
    l: f64,
    l_floor: u32,
    rabi: Option<f64>,
    time_s: Option<f64>,
    time_note: Option<&'static str>,
    raman_time_lower_bound_s: Option<f64>,
    regime: Option<String>,
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

pub fn beta(arg: BetaArg) -> RamanBeta {
    match arg {
        BetaArg::Computed => RamanBeta::Computed,
        BetaArg::UnitProduct => RamanBeta::UnitProduct,
    }
}

pub fn leak(arg: LeakArg) -> LeakBranch {
    match arg {
        LeakArg::GroundPartial => LeakBranch::GroundPartial,
        LeakArg::HalfGroundPartial => LeakBranch::HalfGroundPartial,
    }
}

/// q, c, k from flags or file; `None` when error correction is off.
pub fn overheads(
    enabled: bool,
    q: Option<f64>,
    c: Option<f64>,
    k: Option<u32>,
) -> Option<QecOverheads> {
    if !(enabled || q.is_some() || c.is_some() || k.is_some()) {
        return None;
    }
    let d = QecOverheads::default();
    Some(QecOverheads {
        q: q.unwrap_or(d.q),
        c: c.unwrap_or(d.c),
        k: k.unwrap_or(d.k),
    })
}

fn build_scenario(args: &BoundArgs, file: &FileConfig, db: &IonDatabase) -> Result<BoundScenario, CliError> {
    let name = pick(args.ion.clone(), file.ion.clone())
        .ok_or_else(|| CliError::Input("--ion is required".into()))?;
    let ion = db.find(&name).map_err(input)?;
    let encoding = match pick(args.encoding, parse_enum("encoding", file.encoding.as_ref())?) {
        Some(EncodingArg::Raman) => Encoding::Raman,
        _ => Encoding::Metastable,
    };
    let mut s = BoundScenario::new(ion, encoding).map_err(input)?;
    if let Some(case) = pick(args.case, parse_enum("case", file.case.as_ref())?) {
        s.transition_case = match case {
            CaseArg::A => TransitionCase::AQuadrupole,
            CaseArg::B => TransitionCase::BOctupole,
        };
    }
    if let Some(eta) = pick(args.eta, file.eta) {
        s.eta = eta;
    }
    if let Some(eps) = pick(args.epsilon, file.epsilon) {
        s.gate_model.epsilon = eps;
    }
    let b = &mut s.budgets;
    for (slot, flag, from_file) in [
        (&mut b.p_em_1, args.p_em_1, file.p_em_1),
        (&mut b.p_em_2, args.p_em_2, file.p_em_2),
        (&mut b.p_em_3, args.p_em_3, file.p_em_3),
        (&mut b.p_fail, args.p_fail, file.p_fail),
        (&mut b.p_out, args.p_out, file.p_out),
    ] {
        if let Some(v) = pick(flag, from_file) {
            *slot = v;
        }
    }
    s.qec = overheads(
        args.qec,
        pick(args.overheads.q, file.q),
        pick(args.overheads.c, file.c),
        pick(args.overheads.k, file.k),
    );
    if let Some(b) = pick(args.raman_beta, parse_enum("raman_beta", file.raman_beta.as_ref())?) {
        s.raman_beta = beta(b);
    }
    if let Some(l) = pick(args.leak_branch, parse_enum("leak_branch", file.leak_branch.as_ref())?) {
        s.leak_branch = leak(l);
    }
    s.delta2 = pick(args.delta2, file.delta2);
    s.delta3 = pick(args.delta3, file.delta3);
    s.validate().map_err(input)?;
    Ok(s)
}

fn naive(args: &BoundArgs, file: &FileConfig) -> Result<BoundOutput, CliError> {
    let delta2 = pick(args.delta2, file.delta2).ok_or_else(|| CliError::Input("--delta2 is required".into()))?;
    let gamma22 = pick(args.gamma22, file.gamma22).ok_or_else(|| CliError::Input("--gamma22 is required".into()))?;
    let epsilon = pick(args.epsilon, file.epsilon).unwrap_or(216.0);
    let p = pick(args.p_em_2, file.p_em_2).unwrap_or(1.0);
    let l = bound_raman_naive(delta2, gamma22, epsilon, p).map_err(input)?;
    Ok(BoundOutput {
        ion: None,
        encoding: None,
        case: None,
        eta: None,
        epsilon,
        qec: None,
        l,
        l_floor: floor_bits(l),
        rabi: None,
        time_s: None,
        time_note: None,
        raman_time_lower_bound_s: None,
        regime: None,
    })
}

fn evaluate(args: &BoundArgs, file: &FileConfig, db: &IonDatabase) -> Result<BoundOutput, CliError> {
    let s = build_scenario(args, file, db)?;
    let rabi = pick(args.rabi, file.rabi);
    let l = match (s.encoding, s.qec.is_some()) {
        (Encoding::Metastable, false) => bound_metastable(&s),
        (Encoding::Metastable, true) => bound_qec_metastable(&s),
        (Encoding::Raman, false) => bound_raman(&s),
        (Encoding::Raman, true) => bound_qec_raman(&s),
    }
    .map_err(input)?;

    let mut out = BoundOutput {
        ion: Some(s.ion.name.clone()),
        encoding: Some(s.encoding),
        case: Some(s.transition_case),
        eta: Some(s.eta),
        epsilon: s.epsilon(),
        qec: s.qec,
        l,
        l_floor: floor_bits(l),
        rabi,
        time_s: None,
        time_note: None,
        raman_time_lower_bound_s: None,
        regime: None,
    };

    match s.encoding {
        Encoding::Metastable => {
            let omega = match (rabi, s.qec) {
                (Some(r), _) => Some(r),
                (None, None) => {
                    let gamma11 = s.ion.metastable_view().map_err(input)?.gamma11;
                    out.time_note = Some("Rabi frequency at the p_em_1 budget");
                    Some(required_rabi_ratio(l, s.eta, s.epsilon(), s.budgets.p_em_1).map_err(input)? * gamma11)
                }
                (None, Some(_)) => None,
            };
            if let Some(omega) = omega {
                out.rabi = Some(omega);
                out.time_s = Some(total_time(l, &s, omega).map_err(input)?);
            }
        }
        Encoding::Raman => {
            let v = s.ion.raman_view().map_err(input)?;
            let delta3 = s.delta3.unwrap_or(v.delta3);
            out.raman_time_lower_bound_s = Some(
                raman_time_lower_bound(l, s.epsilon(), v.gamma33_00, v.gamma22_00, delta3.abs(), s.qec.map(|q| q.c))
                    .map_err(input)?,
            );
            if let (Some(omega), Some(_)) = (rabi, s.delta2) {
                out.time_s = Some(total_time(l, &s, omega).map_err(input)?);
            }
            if let (Some(o02), Some(o03), Some(d2)) = (rabi, pick(args.rabi03, file.rabi03), s.delta2) {
                out.regime = Some(match raman_regime(o03, delta3, o02, d2) {
                    Ok(r) => format!("{r:?}"),
                    Err(e) => e.to_string(),
                });
            }
        }
    }
    Ok(out)
}

fn print_text(o: &BoundOutput) {
    let opt = |x: Option<f64>| x.map(g6).unwrap_or_else(|| "-".into());
    if let Some(ion) = &o.ion {
        println!("ion          {ion}");
    }
    if let Some(enc) = o.encoding {
        println!("encoding     {}", if enc == Encoding::Raman { "raman" } else { "metastable" });
    }
    if let Some(case) = o.case {
        println!("case         {}", if case == TransitionCase::AQuadrupole { "a" } else { "b" });
    }
    if let Some(eta) = o.eta {
        println!("eta          {}", g6(eta));
    }
    println!("epsilon      {}", g6(o.epsilon));
    if let Some(q) = o.qec {
        println!("qec          q={} c={} k={}", g6(q.q), g6(q.c), q.k);
    }
    println!("L            {}", g6(o.l));
    println!("L (floor)    {}", o.l_floor);
    if o.rabi.is_some() {
        println!("rabi         {} rad/s", opt(o.rabi));
    }
    if let Some(t) = o.time_s {
        println!("time         {} s{}", g6(t), o.time_note.map(|n| format!("  ({n})")).unwrap_or_default());
    }
    if let Some(t) = o.raman_time_lower_bound_s {
        println!("time (min)   {} s", g6(t));
    }
    if let Some(r) = &o.regime {
        println!("regime       {r}");
    }
}

pub fn run(args: &BoundArgs, file: &FileConfig, db: &IonDatabase) -> Result<ExitCode, CliError> {
    let out = if args.naive_raman {
        naive(args, file)?
    } else {
        evaluate(args, file, db)?
    };
    match args.format {
        Format::Json => println!("{}", to_json_6(&out)),
        Format::Text | Format::Csv => print_text(&out),
    }
    Ok(ExitCode::SUCCESS)
}
