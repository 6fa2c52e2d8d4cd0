//! One adapter per subcommand: parse, call the library, shape the report.

use qs_fractal::digit_stats::{
    oscillation_report, periodic_frequencies, periodic_mean, running_mean_series, RunningStats,
};
use qs_fractal::dim_opt::{
    m0_optimum, m1_optimum, m2_dimension, maximize_be_constrained, maximize_be_linear,
    solve_cubic_real, Cubic,
};
use qs_fractal::fractal_dim::{ak_dimension, be_dimension, level_set_lower_bound, moran_dimension};
use qs_fractal::monte_carlo::{borel_experiment, mean_distribution_experiment, ExperimentConfig};
use qs_fractal::qs_system::{PeriodicStream, WordStream};
use qs_fractal::special_numbers::{
    cyclic_normal, AkStream, ChampernowneStream, CopelandErdosStream, OscillatingNumber,
};
use qs_fractal::{
    DigitStream, DigitWord, FrequencyVector, PeriodicDigits, QsError, QsSystem, Scalar,
};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{Report, Table};
use crate::{on, CliError};

type Done = (String, Value, Report);

pub fn run(cli: &Cli) -> Result<Done, CliError> {
    let cap = cli.max_digits;
    let named = |name: &str, inputs: Value, r: Report| (name.to_string(), inputs, r);
    Ok(match &cli.command {
        Command::Encode(a) => named("encode", inputs(a), encode(a, cap)?),
        Command::Decode(a) => named("decode", inputs(a), decode(a)?),
        Command::Cylinder(a) => named("cylinder", inputs(a), cylinder(a)?),
        Command::Stats(a) => named("stats", inputs(a), stats(a, cap)?),
        Command::Oscillation(a) => named("oscillation", inputs(a), oscillation(a, cap)?),
        Command::Dim(d) => match d {
            DimCommand::Be(a) => named("dim be", inputs(a), dim_be(a)?),
            DimCommand::Moran(a) => named("dim moran", inputs(a), dim_moran(a)?),
            DimCommand::Ak(a) => named("dim ak", inputs(a), dim_ak(a)?),
            DimCommand::LevelBound(a) => named("dim level-bound", inputs(a), dim_level(a)?),
        },
        Command::Opt(o) => match o {
            OptCommand::M0 => named("opt m0", json!({}), opt_m0()?),
            OptCommand::M1 => named("opt m1", json!({}), opt_m1()?),
            OptCommand::M2 => named("opt m2", json!({}), opt_m2()?),
            OptCommand::Constrained(a) => named("opt constrained", inputs(a), opt_constrained(a)?),
        },
        Command::Cubic(a) => named("cubic", inputs(a), cubic(a)?),
        Command::Construct(c) => {
            let (name, inputs, report) = construct(c, cap)?;
            named(name, inputs, report)
        }
        Command::Simulate(s) => match s {
            SimulateCommand::Borel(a) => named("simulate borel", inputs(a), borel(a, cap)?),
            SimulateCommand::MeanDist(a) => {
                named("simulate mean-dist", inputs(a), mean_dist(a, cap)?)
            }
        },
    })
}

fn inputs(a: &impl serde::Serialize) -> Value {
    serde_json::to_value(a).expect("arguments serialize")
}

fn system(q: &List<Scalar>) -> Result<QsSystem, CliError> {
    QsSystem::new(q.0.clone()).map_err(on("--q"))
}

fn uniform_or(
    q: &Option<List<Scalar>>,
    s: usize,
    flag: &'static str,
) -> Result<QsSystem, CliError> {
    match q {
        Some(q) => system(q),
        None => QsSystem::uniform(s).map_err(on(flag)),
    }
}

fn check_cap(n: u64, cap: u64, flag: &'static str) -> Result<usize, CliError> {
    if n > cap {
        return Err(on(flag)(QsError::PrefixTooLong { requested: n, cap }));
    }
    usize::try_from(n).map_err(|_| on(flag)(QsError::Overflow("digit count")))
}

fn digit_table(digits: &[u8]) -> Table {
    Table {
        header: vec!["position".into(), "digit".into()],
        rows: digits
            .iter()
            .enumerate()
            .map(|(i, d)| vec![(i + 1).to_string(), d.to_string()])
            .collect(),
    }
}

fn exact_string(x: &Scalar) -> Option<String> {
    x.as_exact().map(ToString::to_string)
}

fn encode(a: &EncodeArgs, cap: u64) -> Result<Report, CliError> {
    let sys = system(&a.q)?;
    let n = check_cap(a.n, cap, "--n")?;
    let enc = sys.encode(&a.x, n).map_err(on("--x"))?;
    let table = digit_table(enc.word.digits());
    Ok(Report::new(&enc, enc.backend.as_str()).with_table(table))
}

fn decode(a: &DecodeArgs) -> Result<Report, CliError> {
    let sys = system(&a.q)?;
    let s = sys.s();
    let value = match &a.period {
        Some(period) => {
            let p =
                PeriodicDigits::from_usizes(&a.digits.0, &period.0, s).map_err(on("--period"))?;
            sys.decode_periodic(&p).map_err(on("--period"))?
        }
        None => {
            let w = DigitWord::from_usizes(&a.digits.0, s).map_err(on("--digits"))?;
            sys.decode_word(&w).map_err(on("--digits"))?
        }
    };
    let result = json!({ "value": value.to_f64(), "exact": exact_string(&value) });
    Ok(Report::new(result, sys.backend().as_str()))
}

fn cylinder(a: &CylinderArgs) -> Result<Report, CliError> {
    let sys = system(&a.q)?;
    let w = DigitWord::from_usizes(&a.digits.0, sys.s()).map_err(on("--digits"))?;
    let c = sys.cylinder(&w).map_err(on("--digits"))?;
    let right = c.right();
    let result = json!({
        "prefix": c.prefix,
        "left": c.left.to_f64(),
        "right": right.to_f64(),
        "length": c.length.to_f64(),
        "left_exact": exact_string(&c.left),
        "right_exact": exact_string(&right),
        "length_exact": exact_string(&c.length),
    });
    Ok(Report::new(result, sys.backend().as_str()))
}

fn stats_value(st: &RunningStats) -> Value {
    let mut v = serde_json::to_value(st).expect("stats serialize");
    v["mean_exact"] = json!(st.mean_exact().to_string());
    v["freqs_exact"] = json!((0..st.alphabet())
        .map(|i| st.freq_exact(i).to_string())
        .collect::<Vec<_>>());
    v
}

fn stats(a: &StatsArgs, cap: u64) -> Result<Report, CliError> {
    let s = match (&a.q, a.s) {
        (Some(q), Some(s)) if q.0.len() != s => {
            return Err(CliError::Usage(format!(
                "--s {s} does not match the {} weights in --q",
                q.0.len()
            )))
        }
        (Some(q), _) => q.0.len(),
        (None, Some(s)) => s,
        (None, None) => return Err(CliError::Usage("stats needs --q or --s".into())),
    };

    if let Some(period) = &a.period {
        let pre = a.digits.as_ref().map(|d| d.0.as_slice()).unwrap_or(&[]);
        let p = PeriodicDigits::from_usizes(pre, &period.0, s).map_err(on("--period"))?;
        let freqs = periodic_frequencies(&p);
        let mean = periodic_mean(&p);
        let result = json!({
            "freqs": freqs.iter().map(qs_fractal::scalar::rational_to_f64).collect::<Vec<_>>(),
            "freqs_exact": freqs.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "mean": qs_fractal::scalar::rational_to_f64(&mean),
            "mean_exact": mean.to_string(),
            "canonical": p.canonical(),
        });
        return Ok(Report::new(result, "exact"));
    }

    let (word, backend) = match (&a.digits, &a.x) {
        (Some(d), None) => {
            check_cap(d.0.len() as u64, cap, "--digits")?;
            (
                DigitWord::from_usizes(&d.0, s).map_err(on("--digits"))?,
                "exact",
            )
        }
        (None, Some(x)) => {
            let sys = system(a.q.as_ref().expect("clap enforces --q with --x"))?;
            let n = check_cap(a.n.expect("clap enforces --n with --x"), cap, "--n")?;
            let enc = sys.encode(x, n).map_err(on("--x"))?;
            (enc.word, enc.backend.as_str())
        }
        _ => {
            return Err(CliError::Usage(
                "stats needs --digits, --x or --period".into(),
            ))
        }
    };

    let mut stream = WordStream::new(word);
    match &a.checkpoints {
        Some(cps) => {
            let series = running_mean_series(&mut stream, &cps.0).map_err(on("--checkpoints"))?;
            let mut header = vec!["position".to_string(), "mean".to_string()];
            header.extend((0..s).map(|i| format!("freq_{i}")));
            let rows = series
                .iter()
                .map(|p| {
                    let mut row = vec![p.position.to_string(), p.mean().to_string()];
                    row.extend(p.stats.freqs().iter().map(f64::to_string));
                    row
                })
                .collect();
            let result: Vec<Value> = series
                .iter()
                .map(|p| {
                    let mut v = stats_value(&p.stats);
                    v["position"] = json!(p.position);
                    v
                })
                .collect();
            Ok(
                Report::new(json!({ "series": result }), backend)
                    .with_table(Table { header, rows }),
            )
        }
        None => {
            let mut st = RunningStats::new(s);
            while let Some(d) = stream.next_digit() {
                st.accumulate(d as usize).map_err(on("--digits"))?;
            }
            Ok(Report::new(stats_value(&st), backend))
        }
    }
}

fn oscillation(a: &OscillationArgs, cap: u64) -> Result<Report, CliError> {
    if !(3..62).contains(&a.k) {
        return Err(CliError::Usage("--k must be between 3 and 61".into()));
    }
    let mut x = OscillatingNumber::new(a.c, a.d, a.s).map_err(on("--c/--d"))?;
    let d_ends = OscillatingNumber::d_run_ends(a.k);
    let r_ends = OscillatingNumber::round_ends(a.k);
    check_cap(*r_ends.last().expect("k >= 3"), cap, "--k")?;

    let mut all: Vec<u64> = d_ends.iter().chain(&r_ends).copied().collect();
    all.sort_unstable();
    let series = running_mean_series(&mut x, &all).map_err(on("--k"))?;
    let at = |pos: u64| &series[all.binary_search(&pos).expect("requested")];

    let mut rounds = Vec::new();
    let mut rows = Vec::new();
    for (k, (&pd, &pr)) in (1..=a.k).zip(d_ends.iter().zip(&r_ends)) {
        let (sd, sr) = (at(pd), at(pr));
        let gap = (sd.mean() - sr.mean()).abs();
        rows.push(vec![
            k.to_string(),
            pd.to_string(),
            sd.mean().to_string(),
            sd.mean_exact().to_string(),
            pr.to_string(),
            sr.mean().to_string(),
            sr.mean_exact().to_string(),
            gap.to_string(),
        ]);
        rounds.push(json!({
            "k": k,
            "d_run_end": pd,
            "mean_at_d_run_end": sd.mean(),
            "mean_at_d_run_end_exact": sd.mean_exact().to_string(),
            "round_end": pr,
            "mean_at_round_end": sr.mean(),
            "mean_at_round_end_exact": sr.mean_exact().to_string(),
            "gap": gap,
        }));
    }
    let summary = oscillation_report(&mut x, &d_ends, &r_ends).map_err(on("--k"))?;
    let header = [
        "k",
        "d_run_end",
        "mean_at_d_run_end",
        "mean_at_d_run_end_exact",
        "round_end",
        "mean_at_round_end",
        "mean_at_round_end_exact",
        "gap",
    ]
    .map(String::from)
    .to_vec();
    Ok(
        Report::new(json!({ "rounds": rounds, "summary": summary }), "exact")
            .with_table(Table { header, rows }),
    )
}

fn dim_be(a: &DimBeArgs) -> Result<Report, CliError> {
    let sys = uniform_or(&a.q, a.tau.0.len(), "--tau")?;
    let tau = FrequencyVector::new(a.tau.0.clone()).map_err(on("--tau"))?;
    let d = be_dimension(&sys, &tau).map_err(on("--tau"))?;
    Ok(Report::new(&d, "float"))
}

fn dim_moran(a: &DimMoranArgs) -> Result<Report, CliError> {
    let sys = system(&a.q)?;
    let d = moran_dimension(&sys, &a.subset.0).map_err(on("--subset"))?;
    Ok(Report::new(&d, "float"))
}

fn dim_ak(a: &DimAkArgs) -> Result<Report, CliError> {
    let r = ak_dimension(a.k).map_err(on("--k"))?;
    let result = json!({
        "value": qs_fractal::scalar::rational_to_f64(&r),
        "exact": r.to_string(),
        "method": "closed_form",
    });
    Ok(Report::new(result, "exact"))
}

fn dim_level(a: &DimLevelArgs) -> Result<Report, CliError> {
    let sys = system(&a.q)?;
    let d = level_set_lower_bound(&sys, a.theta).map_err(on("--theta"))?;
    Ok(Report::new(&d, "float"))
}

fn opt_m0() -> Result<Report, CliError> {
    Ok(Report::new(m0_optimum().map_err(on("opt m0"))?, "float"))
}

fn opt_m1() -> Result<Report, CliError> {
    Ok(Report::new(m1_optimum().map_err(on("opt m1"))?, "float"))
}

fn opt_m2() -> Result<Report, CliError> {
    let r = m2_dimension().map_err(on("opt m2"))?;
    let result = json!({
        "tau": [1, 0, 0],
        "dim": qs_fractal::scalar::rational_to_f64(&r),
        "exact": r.to_string(),
        "method": "forced_vertex",
    });
    Ok(Report::new(result, "exact"))
}

fn opt_constrained(a: &OptConstrainedArgs) -> Result<Report, CliError> {
    let sys = uniform_or(&a.q, a.constraint.coeffs.len(), "--constraint")?;
    let opt = if sys.s() == 3 {
        maximize_be_constrained(&sys, &a.constraint)
    } else {
        maximize_be_linear(&sys, &a.constraint)
    }
    .map_err(on("--constraint"))?;
    Ok(Report::new(&opt, "float"))
}

fn cubic(a: &CubicArgs) -> Result<Report, CliError> {
    let [ca, cb, cc, cd] = a.coeffs.0[..] else {
        return Err(CliError::Usage(format!(
            "cubic needs 4 coefficients, got {}",
            a.coeffs.0.len()
        )));
    };
    let poly = Cubic::new(ca, cb, cc, cd).map_err(on("coefficients"))?;
    let roots = solve_cubic_real(&poly).map_err(on("coefficients"))?;
    let residuals: Vec<f64> = roots.iter().map(|&r| poly.eval(r).abs()).collect();
    let rows = roots
        .iter()
        .zip(&residuals)
        .map(|(r, e)| vec![r.to_string(), e.to_string()])
        .collect();
    let result = json!({
        "roots": roots,
        "residuals": residuals,
        "discriminant": poly.discriminant(),
        "real_root_count": roots.len(),
    });
    Ok(Report::new(result, "float").with_table(Table {
        header: vec!["root".into(), "residual".into()],
        rows,
    }))
}

fn construct(c: &ConstructCommand, cap: u64) -> Result<(&'static str, Value, Report), CliError> {
    let take = |st: &mut dyn DigitStream, n: u64| -> Result<DigitWord, CliError> {
        check_cap(n, cap, "--n")?;
        st.take_word(n, cap).map_err(on("--n"))
    };
    let (name, inputs, word) = match c {
        ConstructCommand::Oscillating(a) => {
            let mut st = OscillatingNumber::new(a.c, a.d, a.s).map_err(on("--c/--d"))?;
            ("construct oscillating", inputs(a), take(&mut st, a.n)?)
        }
        ConstructCommand::Ak(a) => {
            let mut st = AkStream::seeded(a.k, a.s, a.seed).map_err(on("--k"))?;
            ("construct ak", inputs(a), take(&mut st, a.n)?)
        }
        ConstructCommand::Champernowne(a) => {
            let mut st = ChampernowneStream::new();
            ("construct champernowne", inputs(a), take(&mut st, a.n)?)
        }
        ConstructCommand::CopelandErdos(a) => {
            let mut st = CopelandErdosStream::new();
            ("construct copeland-erdos", inputs(a), take(&mut st, a.n)?)
        }
        ConstructCommand::Cyclic(a) => {
            let mut st = PeriodicStream::new(cyclic_normal(a.s).map_err(on("--s"))?);
            ("construct cyclic", inputs(a), take(&mut st, a.n)?)
        }
    };
    let table = digit_table(word.digits());
    let result = json!({ "alphabet": word.alphabet(), "digits": word });
    Ok((name, inputs, Report::new(result, "exact").with_table(table)))
}

fn experiment(a: &SimulateArgs, cap: u64) -> Result<ExperimentConfig, CliError> {
    check_cap(a.n, cap, "--n")?;
    let sys = system(&a.q)?;
    let mut cfg = ExperimentConfig::lebesgue(sys, a.n, a.trials, a.seed);
    if let Some(m) = &a.measure {
        cfg = cfg.with_measure(m.0.clone());
    }
    cfg.validate().map_err(on("--measure/--n/--trials"))?;
    Ok(cfg)
}

fn borel(a: &SimulateArgs, cap: u64) -> Result<Report, CliError> {
    let cfg = experiment(a, cap)?;
    let r = borel_experiment(&cfg).map_err(on("simulate borel"))?;
    let rows = r
        .per_trial_max_dev
        .iter()
        .enumerate()
        .map(|(t, dev)| {
            vec![
                t.to_string(),
                dev.to_string(),
                r.per_trial_mean[t].to_string(),
                r.per_trial_pass[t].to_string(),
            ]
        })
        .collect();
    Ok(Report::new(&r, "float").with_table(Table {
        header: ["trial", "max_dev", "mean", "passes"]
            .map(String::from)
            .to_vec(),
        rows,
    }))
}

fn mean_dist(a: &MeanDistArgs, cap: u64) -> Result<Report, CliError> {
    let cfg = experiment(&a.sim, cap)?;
    let h = mean_distribution_experiment(&cfg, a.bins).map_err(on("--bins"))?;
    let rows = h
        .bins
        .iter()
        .map(|b| {
            vec![
                b.bin_left.to_string(),
                (b.bin_left + h.bin_width).to_string(),
                b.count.to_string(),
            ]
        })
        .collect();
    Ok(Report::new(&h, "float").with_table(Table {
        header: vec!["bin_left".into(), "bin_right".into(), "count".into()],
        rows,
    }))
}
