//! `jetform`: exact differential operators, jets and distributions from the
//! command line. Every command prints one JSON document.

mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use jetform::diffop::{curry, decompose_first_order, delta_chain, vector_field};
use jetform::dist::{
    adjoint_check, lie_derivative_dist, pair, recover_coefficients, restricts_to_test, transpose, RecoveryBounds,
};
use jetform::jet::{d1, factorize, jet_prolong, jet_rank, Connection};
use jetform::ring::PolyMatrix;
use jetform::serial::{DistributionDto, JetHomDto, JetVectorDto};
use jetform::testspace::{seminorm, FiberJetFunction, TestBox, TestSection};
use jetform::{
    infer_nvars, parse_operator, parse_poly, parse_poly_matrix, parse_rational, parse_section, verify, Dist,
    Operator, Poly, RBox, Sect,
};

use output::{finish, Failure, EXIT_USAGE, MAX_FAILURES};

#[derive(Parser, Debug)]
#[command(name = "jetform", version, about = "Exact differential operators, jets and distributions")]
struct Cli {
    /// Number of variables; inferred from the literals when absent.
    #[arg(short = 'n', global = true)]
    nvars: Option<usize>,
    /// Box bounds `l1,r1[,l2,r2,...]`; defaults to the unit cube.
    #[arg(long = "box", global = true, value_name = "BOUNDS", allow_hyphen_values = true)]
    bx: Option<String>,
    /// Bump exponent of test sections; defaults to the operator order plus one.
    #[arg(short = 'p', global = true)]
    bump: Option<u32>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Indented multi-line JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form `Σ C_α ∂^α` of an operator literal.
    Normalize { operator: String },
    /// Order of an operator; null for the zero operator.
    Order { operator: String },
    /// `δ_{a_1} ⋯ δ_{a_k} Δ` for the given polynomials.
    Delta {
        operator: String,
        #[arg(required = true)]
        polys: Vec<String>,
    },
    /// Split a first-order scalar operator into multiplication plus derivation.
    Decompose { operator: String },
    /// The scalar operator `a ↦ Δ(a p)`.
    Curry { operator: String, section: String },
    /// Rank of the jet module `J^k` of a rank-`m` bundle.
    JetRank {
        #[arg(short = 'k')]
        order: usize,
        #[arg(short = 'm', default_value_t = 1)]
        rank: usize,
    },
    /// Jet prolongation `J^k s`.
    Prolong {
        #[arg(short = 'k')]
        order: usize,
        section: String,
    },
    /// The jet homomorphism through which an operator factors.
    Factorize { operator: String },
    /// Coordinate differential `d¹f`.
    D1 { poly: String },
    /// Covariant differential `(∇_μ s)_μ`, or `∇_u s` with `--along`.
    Nabla {
        section: String,
        /// Connection matrix `Γ_μ`, one per axis in order; missing axes are zero.
        #[arg(long = "gamma")]
        gamma: Vec<String>,
        /// Vector field components `u^1, ..., u^n`.
        #[arg(long)]
        along: Option<String>,
    },
    /// Grid estimate of `sup |φ(J^r s)|` for the jet function of a scalar operator.
    Seminorm {
        phi: String,
        section: String,
        #[arg(long, default_value_t = 1024)]
        resolution: usize,
    },
    /// `⟨s, ψ⟩` for a test section `w^p q` and a distribution in JSON.
    Pair { section: String, distribution: String },
    /// `Δ′ψ`.
    Transpose { operator: String, distribution: String },
    /// Exact check of `⟨Δs, ψ⟩ = ⟨s, Δ′ψ⟩`.
    AdjointCheck {
        operator: String,
        section: String,
        distribution: String,
    },
    /// Lie derivative of a scalar distribution along a vector field.
    Lie { field: String, distribution: String },
    /// Reconstruct an operator from its action on test sections.
    Recover {
        operator: String,
        /// Order bound; defaults to the operator's order.
        #[arg(short = 'k')]
        order: Option<usize>,
        /// Coefficient degree bound; defaults to the operator's.
        #[arg(long)]
        degree: Option<usize>,
        /// Probe the transpose for restriction to test sections instead.
        #[arg(long)]
        restrict: bool,
        /// With `--restrict`, forget the embedding of densities first.
        #[arg(long, requires = "restrict")]
        strip: bool,
    },
    /// Run the property suite; the exit status is the number of failures.
    VerifyAll,
}

/// Dimension, box and bump budget shared by one invocation.
struct Session {
    nvars: usize,
    bx: RBox,
    bump: Option<u32>,
}

impl Session {
    fn new(cli: &Cli) -> Result<Self, Failure> {
        let bounds = cli
            .bx
            .as_deref()
            .map(|text| {
                text.split(',')
                    .map(|c| parse_rational(c).map_err(|e| Failure::of("--box", e)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        if let Some(b) = &bounds {
            if b.len() % 2 != 0 || b.is_empty() {
                return Err(Failure::Math("--box needs pairs of bounds".into()));
            }
        }
        let literals = literals(&cli.command);
        let nvars = cli
            .nvars
            .or_else(|| bounds.as_ref().map(|b| b.len() / 2))
            .unwrap_or_else(|| literals.iter().map(|s| infer_nvars(s)).max().unwrap_or(1));
        if nvars == 0 {
            return Err(Failure::Math("dimension must be at least 1".into()));
        }
        let bx = match bounds {
            None => TestBox::unit(nvars),
            Some(b) => {
                if b.len() / 2 != nvars {
                    return Err(Failure::Math(format!(
                        "--box has {} intervals but the dimension is {nvars}",
                        b.len() / 2
                    )));
                }
                let (lower, upper) = b.chunks(2).map(|c| (c[0].clone(), c[1].clone())).unzip();
                TestBox::new(lower, upper)?
            }
        };
        if cli.bump == Some(0) {
            return Err(Failure::Math("bump exponent must be at least 1".into()));
        }
        Ok(Session {
            nvars,
            bx,
            bump: cli.bump,
        })
    }

    fn operator(&self, argument: &'static str, text: &str) -> Result<Operator, Failure> {
        parse_operator(text, self.nvars)
            .and_then(|e| e.normalize())
            .map_err(|e| Failure::of(argument, e))
    }

    fn poly(&self, argument: &'static str, text: &str) -> Result<Poly, Failure> {
        parse_poly(text, self.nvars).map_err(|e| Failure::of(argument, e))
    }

    fn section(&self, argument: &'static str, text: &str) -> Result<Sect, Failure> {
        parse_section(text, self.nvars).map_err(|e| Failure::of(argument, e))
    }

    /// `p` from the command line, else one more than `order`.
    fn bump_for(&self, order: Option<usize>) -> u32 {
        self.bump.unwrap_or(order.unwrap_or(0) as u32 + 1)
    }

    fn test_section(&self, text: &str, order: Option<usize>) -> Result<TestSection<jetform::Rational>, Failure> {
        let q = self.section("section", text)?;
        Ok(TestSection::new(self.bx.clone(), self.bump_for(order), q)?)
    }

    fn distribution(&self, text: &str, rank: Option<usize>) -> Result<Dist, Failure> {
        let dto: DistributionDto = serde_json::from_str(text).map_err(|e| Failure::Parse {
            argument: "distribution",
            position: e.column().saturating_sub(1),
            message: e.to_string(),
        })?;
        dto.decode(&self.bx, rank).map_err(|e| Failure::of("distribution", e))
    }
}

fn literals(command: &Command) -> Vec<&str> {
    match command {
        Command::Normalize { operator }
        | Command::Order { operator }
        | Command::Decompose { operator }
        | Command::Factorize { operator }
        | Command::Recover { operator, .. } => vec![operator],
        Command::Delta { operator, polys } => std::iter::once(operator.as_str())
            .chain(polys.iter().map(String::as_str))
            .collect(),
        Command::Curry { operator, section } => vec![operator, section],
        Command::Prolong { section, .. } => vec![section],
        Command::D1 { poly } => vec![poly],
        Command::Nabla { section, gamma, along } => std::iter::once(section.as_str())
            .chain(gamma.iter().map(String::as_str))
            .chain(along.as_deref())
            .collect(),
        Command::Seminorm { phi, section, .. } => vec![phi, section],
        Command::Pair { section, .. } => vec![section],
        Command::Transpose { operator, .. } => vec![operator],
        Command::AdjointCheck { operator, section, .. } => vec![operator, section],
        Command::Lie { field, .. } => vec![field],
        Command::JetRank { .. } | Command::VerifyAll => vec![],
    }
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|t| t.to_string()).collect()
}

fn run(cli: &Cli) -> Result<(Value, u8), Failure> {
    let session = Session::new(cli)?;
    let ok = |v: Value| Ok((v, 0));
    match &cli.command {
        Command::Normalize { operator } => {
            let op = session.operator("operator", operator)?;
            ok(json!({"operator": op.to_string()}))
        }
        Command::Order { operator } => {
            let op = session.operator("operator", operator)?;
            ok(json!({"order": op.order()}))
        }
        Command::Delta { operator, polys } => {
            let op = session.operator("operator", operator)?;
            let tuple = polys
                .iter()
                .map(|p| session.poly("poly", p))
                .collect::<Result<Vec<_>, _>>()?;
            let out = delta_chain(&tuple, &op)?;
            ok(json!({"operator": out.to_string(), "order": out.order()}))
        }
        Command::Decompose { operator } => {
            let op = session.operator("operator", operator)?;
            let (q, d) = decompose_first_order(&op)?;
            let field = vector_field(&d).expect("derivation part is a vector field");
            ok(json!({
                "multiplier": q.to_string(),
                "derivation": d.to_string(),
                "vector_field": strings(&field),
            }))
        }
        Command::Curry { operator, section } => {
            let op = session.operator("operator", operator)?;
            let p = session.section("section", section)?;
            ok(json!({"operator": curry(&op, &p)?.to_string()}))
        }
        Command::JetRank { order, rank } => ok(json!({"rank": jet_rank(session.nvars, *order, *rank)})),
        Command::Prolong { order, section } => {
            let s = session.section("section", section)?;
            let j = jet_prolong(*order, &s);
            ok(serde_json::to_value(JetVectorDto::from(&j)).expect("serializable"))
        }
        Command::Factorize { operator } => {
            let op = session.operator("operator", operator)?;
            let h = factorize(&op)?;
            ok(serde_json::to_value(JetHomDto::from(&h)).expect("serializable"))
        }
        Command::D1 { poly } => {
            let f = session.poly("poly", poly)?;
            ok(json!({"d1": strings(d1(&f).components())}))
        }
        Command::Nabla { section, gamma, along } => {
            let s = session.section("section", section)?;
            let n = session.nvars;
            if gamma.len() > n {
                return Err(Failure::Math(format!("{} connection matrices for {n} axes", gamma.len())));
            }
            let mut matrices = gamma
                .iter()
                .map(|g| parse_poly_matrix(g, n).map_err(|e| Failure::of("--gamma", e)))
                .collect::<Result<Vec<_>, _>>()?;
            matrices.resize(n, PolyMatrix::zero(n, s.rank(), s.rank()));
            let conn = Connection::new(matrices)?;
            match along {
                Some(u) => {
                    let u = session.section("--along", u)?;
                    let out = conn.along(u.components(), &s)?;
                    ok(json!({"along": strings(out.components())}))
                }
                None => {
                    let parts = conn.covariant_differential(&s)?;
                    let rows: Vec<Vec<String>> = parts.iter().map(|p| strings(p.components())).collect();
                    ok(json!({"nabla": rows}))
                }
            }
        }
        Command::Seminorm {
            phi,
            section,
            resolution,
        } => {
            let op = session.operator("phi", phi)?;
            let r = op.order().unwrap_or(0);
            let jet_fn = FiberJetFunction::from_operator(&op, r)?;
            let s = session.test_section(section, op.order())?;
            let est = seminorm(&jet_fn, &s, *resolution)?;
            ok(json!({
                "value": est.value,
                "argmax": est.argmax,
                "spacing": est.spacing,
                "resolution": resolution,
            }))
        }
        Command::Pair { section, distribution } => {
            let s = session.test_section(section, None)?;
            let psi = session.distribution(distribution, Some(s.rank()))?;
            ok(json!({"value": pair(&s, &psi)?.to_string()}))
        }
        Command::Transpose { operator, distribution } => {
            let op = session.operator("operator", operator)?;
            let psi = session.distribution(distribution, Some(op.output_rank()))?;
            let image = transpose(&op).apply(&psi)?;
            ok(serde_json::to_value(DistributionDto::from(&image)).expect("serializable"))
        }
        Command::AdjointCheck {
            operator,
            section,
            distribution,
        } => {
            let op = session.operator("operator", operator)?;
            let s = session.test_section(section, op.order())?;
            let psi = session.distribution(distribution, Some(op.output_rank()))?;
            let lhs = pair(&s.apply_operator(&op)?, &psi)?;
            let rhs = pair(&s, &transpose(&op).apply(&psi)?)?;
            let holds = adjoint_check(&op, &s, &psi)?;
            ok(json!({"holds": holds, "lhs": lhs.to_string(), "rhs": rhs.to_string()}))
        }
        Command::Lie { field, distribution } => {
            let u = session.section("field", field)?;
            let psi = session.distribution(distribution, Some(1))?;
            let image = lie_derivative_dist(u.components(), &psi)?;
            ok(serde_json::to_value(DistributionDto::from(&image)).expect("serializable"))
        }
        Command::Recover {
            operator,
            order,
            degree,
            restrict,
            strip,
        } => {
            let op = session.operator("operator", operator)?;
            let bounds = RecoveryBounds {
                bx: session.bx.clone(),
                order: order.or(op.order()).unwrap_or(0),
                degree: degree.or(op.coefficient_degree()).unwrap_or(0),
            };
            let recovered = if *restrict {
                let theta = if *strip {
                    transpose(&op).strip_embedding()
                } else {
                    transpose(&op)
                };
                restricts_to_test(&theta, &bounds)?
            } else {
                // the plain action; the probes' bump budget is the solver's concern
                Some(recover_coefficients(
                    |t| TestSection::new(t.test_box().clone(), 0, op.apply(&t.realize())?),
                    &bounds,
                    op.input_rank(),
                    op.output_rank(),
                )?)
            };
            ok(json!({
                "operator": recovered.as_ref().map(ToString::to_string),
                "matches": recovered.as_ref() == Some(&op),
            }))
        }
        Command::VerifyAll => {
            let outcomes = verify::run_all(cli.seed);
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let properties: Vec<Value> = outcomes
                .iter()
                .map(|o| json!({"name": o.name, "passed": o.passed, "detail": o.detail}))
                .collect();
            Ok((
                json!({"seed": cli.seed, "properties": properties, "failed": failed}),
                failed.min(MAX_FAILURES) as u8,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    finish(run(&cli), cli.pretty)
}
