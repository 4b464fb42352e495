use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::codec::{decode_state, encode_distribution, encode_state, JsonCarrier};
use super::config::{AlgebraSpec, ExperimentConfig};
use super::run::{build_process, dispatch, AlgebraVisitor};
use super::CliError;
use crate::algebra::{check_hom_property, samples_over, HomSample, Homomorphism};
use crate::chem::table::coarse_grain;
use crate::chem::{alphabet_projection, library_coarse, library_fine, reduce_mod, square_hom, string_monoid_algebra};
use crate::flask::{markov_morphism, FlaskProcess};
use crate::multiset::{all_up_to, Multiset};

pub const REGISTERED_HOMS: &[&str] = &[
    "identity",
    "library-coarse",
    "reduce-mod",
    "square",
    "alphabet-projection",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOptions {
    pub hom: String,
    /// Test every argument tuple and every state over the pool instead of
    /// random samples.
    pub exhaustive: bool,
}

/// Checks the homomorphism law and the naturality square for the named
/// homomorphism out of the configured algebra. Returns whether everything
/// passed; failures are written to `out` with their witnesses.
pub fn run_check(cfg: &ExperimentConfig, opts: &CheckOptions, out: &mut dyn Write) -> Result<bool, CliError> {
    let wrong_algebra = || {
        CliError::config(format!(
            "homomorphism `{}` does not apply to algebra {}",
            opts.hom,
            serde_json::to_string(&cfg.algebra).unwrap_or_default()
        ))
    };
    match (opts.hom.as_str(), &cfg.algebra) {
        ("identity", spec) => dispatch(spec, IdentityCheck { cfg, opts, out }),
        ("library-coarse", AlgebraSpec::Library { overrides }) => {
            let mut fine = library_fine();
            for e in overrides {
                fine = fine.with_entry(&e.row, &e.col, &e.out).map_err(CliError::config)?;
            }
            let h = Homomorphism::new(fine, library_coarse(), coarse_grain).expect("same signature");
            check_hom(&h, cfg, opts, out)
        }
        ("reduce-mod", AlgebraSpec::Modular { modulus }) => {
            let target = cfg
                .check
                .target_modulus
                .ok_or_else(|| CliError::config("reduce-mod needs check.target_modulus"))?;
            let h = reduce_mod(*modulus, target).map_err(CliError::config)?;
            check_hom(&h, cfg, opts, out)
        }
        ("square", AlgebraSpec::Division) => check_hom(&square_hom(), cfg, opts, out),
        ("alphabet-projection", AlgebraSpec::String { alphabet }) => {
            let keep = cfg
                .check
                .keep
                .as_ref()
                .ok_or_else(|| CliError::config("alphabet-projection needs check.keep"))?;
            let h = alphabet_projection(&string_monoid_algebra(alphabet.chars()), keep.chars());
            check_hom(&h, cfg, opts, out)
        }
        (name, _) if REGISTERED_HOMS.contains(&name) => Err(wrong_algebra()),
        (name, _) => Err(CliError::UnknownHom(name.to_string())),
    }
}

struct IdentityCheck<'a> {
    cfg: &'a ExperimentConfig,
    opts: &'a CheckOptions,
    out: &'a mut dyn Write,
}

impl AlgebraVisitor for IdentityCheck<'_> {
    type Output = Result<bool, CliError>;

    fn visit<A>(self, alg: A) -> Self::Output
    where
        A: JsonCarrier + Clone + Send + Sync + 'static,
    {
        check_hom(&Homomorphism::identity(alg), self.cfg, self.opts, self.out)
    }
}

fn random_tuple<E: Clone>(pool: &[E], n: usize, rng: &mut impl Rng) -> Vec<E> {
    (0..n).map(|_| pool[rng.random_range(0..pool.len())].clone()).collect()
}

fn check_hom<A, B>(
    h: &Homomorphism<A, B>,
    cfg: &ExperimentConfig,
    opts: &CheckOptions,
    out: &mut dyn Write,
) -> Result<bool, CliError>
where
    A: JsonCarrier + Clone,
    B: JsonCarrier + Clone,
{
    let spec = &cfg.check;
    let source: FlaskProcess<A> = build_process(h.source().clone(), cfg)?;
    let target = build_process(h.target().clone(), cfg)?;
    let alg = source.algebra();

    let pool: Vec<A::Elem> = match (&spec.pool, alg.listed_elements()) {
        (Some(values), _) => values
            .iter()
            .map(|v| {
                alg.decode(v)
                    .map_err(|m| CliError::config(format!("bad pool element {v}: {m}")))
            })
            .collect::<Result<_, _>>()?,
        (None, Some(all)) => all,
        (None, None) => decode_state(alg, &cfg.initial_state)?.support().cloned().collect(),
    };
    if pool.is_empty() {
        return Err(CliError::config(
            "no labels to test with; set check.pool or initial_state",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let samples: Vec<HomSample<A::Elem>> = if opts.exhaustive {
        samples_over(alg.signature(), &pool)
    } else {
        alg.signature()
            .ops()
            .iter()
            .flat_map(|op| std::iter::repeat_n(op, spec.hom_samples))
            .map(|op| HomSample {
                op: op.name.clone(),
                args: random_tuple(&pool, op.arity, &mut rng),
            })
            .collect()
    };
    let report = check_hom_property(h, &samples);
    let mut passed = report.passed();
    for bad in report.failures() {
        let line = json!({
            "check": "hom-law",
            "pass": false,
            "op": bad.sample.op,
            "args": bad.sample.args.iter().map(|a| alg.encode(a)).collect::<Vec<_>>(),
            "mapped_result": target.algebra().encode(&bad.mapped_result),
            "result_of_mapped": target.algebra().encode(&bad.result_of_mapped),
        });
        writeln!(out, "{line}")?;
    }
    writeln!(
        out,
        "{}",
        json!({"check": "hom-law", "samples": samples.len(), "failures": report.failures().count()})
    )?;

    let mut states = spec
        .states
        .iter()
        .map(|entries| decode_state(alg, entries))
        .collect::<Result<Vec<_>, _>>()?;
    if opts.exhaustive {
        states.extend(all_up_to(&pool, spec.max_total));
    } else {
        for _ in 0..spec.random_states {
            let total = rng.random_range(0..=spec.max_total) as usize;
            states.push(
                random_tuple(&pool, total, &mut rng)
                    .into_iter()
                    .collect::<Multiset<_>>(),
            );
        }
    }

    let morphism = markov_morphism(&source, &target, h)?;
    let mut failures = 0;
    for state in &states {
        let report = morphism.check_naturality(state)?;
        let mut line = json!({
            "check": "naturality",
            "state": encode_state(alg, state),
            "pass": report.passed(),
        });
        if !report.passed() {
            failures += 1;
            let tgt = target.algebra();
            line["image"] = encode_state(tgt, &report.relabelled_state);
            line["step_then_relabel"] = encode_distribution(tgt, &report.step_then_relabel);
            line["relabel_then_step"] = encode_distribution(tgt, &report.relabel_then_step);
        }
        writeln!(out, "{line}")?;
    }
    passed &= failures == 0;
    writeln!(
        out,
        "{}",
        json!({"check": "naturality", "states": states.len(), "failures": failures})
    )?;
    writeln!(out, "{}", json!({"result": if passed { "pass" } else { "fail" }}))?;
    Ok(passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn library(overrides: &str, exhaustive: bool) -> (bool, String) {
        let text = format!(
            r#"{{
            "signature": [{{"name": "interact", "arity": 2}}],
            "algebra": {{"name": "library", "overrides": {overrides}}},
            "protocols": [{{"inputs": 2, "outputs": [{{"var": 0}}, {{"op": "interact", "args": [{{"var": 0}}, {{"var": 1}}]}}]}}],
            "initial_state": [{{"element": "l", "count": 1}}, {{"element": "m_n", "count": 1}}],
            "mode": "exact-step",
            "check": {{"max_total": 3}}
        }}"#
        );
        let cfg = ExperimentConfig::from_json(&text).unwrap();
        let opts = CheckOptions {
            hom: "library-coarse".into(),
            exhaustive,
        };
        let mut out = Vec::new();
        let passed = run_check(&cfg, &opts, &mut out).unwrap();
        (passed, String::from_utf8(out).unwrap())
    }

    #[test]
    fn library_coarse_graining_passes() {
        let (passed, out) = library("[]", true);
        assert!(passed, "{out}");
        assert!(out.ends_with("{\"result\":\"pass\"}\n"));
        // all multisets of total <= 3 over three labels
        assert!(out.contains("\"failures\":0,\"states\":20}"), "{out}");
    }

    #[test]
    fn corrupted_table_reports_witness() {
        let (passed, out) = library(r#"[{"row": "m_n", "col": "m_q", "out": "l"}]"#, true);
        assert!(!passed);
        assert!(out.contains("\"op\":\"interact\",\"pass\":false"), "{out}");
        assert!(out.contains("\"step_then_relabel\""), "{out}");
        assert!(out.ends_with("{\"result\":\"fail\"}\n"));
    }

    #[test]
    fn unknown_and_mismatched_homs() {
        let text = r#"{
            "signature": [{"name": "interact", "arity": 2}],
            "algebra": {"name": "division"},
            "protocols": [{"inputs": 1, "outputs": []}],
            "initial_state": [{"element": "6", "count": 1}],
            "mode": "exact-step"
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        let run = |hom: &str| {
            run_check(
                &cfg,
                &CheckOptions {
                    hom: hom.into(),
                    exhaustive: false,
                },
                &mut Vec::new(),
            )
        };
        assert!(matches!(run("frobenius"), Err(CliError::UnknownHom(_))));
        assert!(matches!(run("reduce-mod"), Err(CliError::Config(_))));
        assert!(run("square").unwrap());
        assert!(run("identity").unwrap());
    }
}
