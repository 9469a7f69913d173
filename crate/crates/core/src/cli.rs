//! The `spinforge` command line: one subcommand per operation, JSON on stdout,
//! exit 0 on pass/found, 1 on fail/absent, 2 on usage errors.

use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::clifford::{weyl_generator, MultiVector};
use crate::coeff::{is_prime_u64, Cyclo8, Ring};
use crate::error::Error;
use crate::galois::{self, ExponentData, PrimeTower, DEFAULT_BOUND, DEFAULT_BOX};
use crate::rootdata::{self, RootType};
use crate::spingroup::{self, SignChange, SpinElement};
use crate::spinrep;

/// Environment variable overriding the default prime search bound.
pub const BOUND_ENV: &str = "SPINFORGE_BOUND";

#[derive(Parser, Debug)]
#[command(name = "spinforge", version, about = "Exact spin-group computations with JSON output")]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parity classification of m: qualifying residue, form type, w0 lift order.
    Parity { m: usize },
    /// Square of the lifted product w_1 ... w_k against (-1)^{k(k+1)/2}.
    SignLaw { m: usize, k: usize },
    /// Projection of a GSpin element (coefficients in Q(zeta_8)) to SO_m.
    Project {
        multivector: String,
        #[arg(long)]
        m: usize,
    },
    /// Symmetry type of the invariant form on the spin module.
    InvariantForm { m: usize },
    /// Spin weights in module order.
    Weights { m: usize },
    /// Simple transitivity of the sign-change group on the spin weights.
    Transitivity { m: usize },
    /// Half the sum of the positive coroots.
    RhoVee { m: usize },
    /// Split Cartan involution height count.
    Cartan { m: usize },
    /// Exhaustive splitting search for the lifted sign-change group.
    Extension { n: usize, root_type: RootType },
    /// Smallest tower of n mutually square primes, all 1 mod 4.
    Tower {
        n: usize,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Smallest p = 1 mod 4 with l exactly dividing p - 1 and the tower square mod p.
    Pair {
        l: u64,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        tower: Vec<u64>,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Smallest prime q of multiplicative order l modulo p.
    OrderPrime {
        p: u64,
        l: u64,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Generic exponents n_alpha in a box.
    Exponents {
        m: usize,
        l: u64,
        #[arg(long = "box", default_value_t = DEFAULT_BOX)]
        box_: i64,
    },
    /// First torus point in mu_l^n separating the spin weights.
    TorusPoint { m: usize, l: u64, p: u64 },
    /// Full pipeline: tower, pair, order prime, exponents, torus point, report.
    Prop26 {
        m: usize,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Parity descent test for an L-parameter with weights m_1..m_n.
    Lparam {
        n: usize,
        #[arg(value_delimiter = ',', allow_negative_numbers = true)]
        weights: Vec<i64>,
    },
}

/// A finished command: JSON payload and whether it passed.
struct Outcome {
    value: Value,
    pass: bool,
}

fn outcome<T: Serialize>(v: &T, pass: bool) -> Outcome {
    Outcome { value: serde_json::to_value(v).expect("serializable"), pass }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn s(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn default_bound() -> Result<u64, Failure> {
    match std::env::var(BOUND_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("{BOUND_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BOUND),
    }
}

fn bound_or_default(b: Option<u64>) -> Result<u64, Failure> {
    b.map_or_else(default_bound, Ok)
}

fn odd_prime(x: u64, what: &str) -> Result<(), Failure> {
    if x < 3 || !is_prime_u64(x) {
        return Err(usage(format!("{what} = {x} is not an odd prime")));
    }
    Ok(())
}

fn sign_law(m: usize, k: usize) -> Result<Outcome, Failure> {
    let n = m / 2;
    if !(1..=n).contains(&k) {
        return Err(usage(format!("k = {k} outside 1..={n}")));
    }
    let mut prod = MultiVector::<Cyclo8>::one(m, &());
    for i in 1..=k {
        prod = &prod * &weyl_generator(i, m, &())?;
    }
    let square = &prod * &prod;
    let expected: i64 = if (k * (k + 1) / 2).is_multiple_of(2) { 1 } else { -1 };
    let pass = square == MultiVector::scalar(m, Cyclo8::from_i64(&(), expected));
    Ok(Outcome { value: json!({"m": s(m), "k": s(k), "square": square.to_text(), "expected": s(expected), "pass": pass}), pass })
}

fn project(text: &str, m: usize) -> Result<Outcome, Failure> {
    let g = MultiVector::<Cyclo8>::parse(m, &(), text)?;
    let el = SpinElement::new(g)?;
    let class = if el.is_spin() { "spin" } else { "gspin" };
    let matrix = spingroup::project(&el);
    Ok(Outcome {
        value: json!({"m": s(m), "element": el.element().to_text(), "class": class, "norm": s(el.norm()), "matrix": matrix}),
        pass: true,
    })
}

fn weights(m: usize) -> Result<Outcome, Failure> {
    let module = spinrep::SpinModule::new(m)?;
    let ws: Vec<Value> = (0..module.dim())
        .map(|k| json!({"subset": module.subsets()[k].iter().map(|i| s(i + 1)).collect::<Vec<_>>(), "weight": module.weight(k)}))
        .collect();
    Ok(Outcome { value: json!({"m": s(m), "dim": s(module.dim()), "weights": ws}), pass: true })
}

fn transitivity(m: usize) -> Result<Outcome, Failure> {
    let holds = rootdata::check_simple_transitivity(m)?;
    let order = SignChange::all(m).len();
    let weights = rootdata::spin_weights(m)?.len();
    Ok(Outcome {
        value: json!({"m": s(m), "group_order": s(order), "weights": s(weights), "simply_transitive": holds}),
        pass: holds,
    })
}

fn pair(l: u64, tower: Vec<u64>, bound: u64) -> Result<Outcome, Failure> {
    odd_prime(l, "l")?;
    for &t in &tower {
        odd_prime(t, "tower prime")?;
    }
    let p = galois::find_pair(l, &tower, bound)?;
    let symbols: Vec<Value> = tower.iter().map(|&t| s(crate::coeff::legendre_u64(t as i64, p).expect("odd prime"))).collect();
    Ok(Outcome {
        value: json!({
            "l": s(l), "p": s(p), "tower": tower.iter().map(s).collect::<Vec<_>>(),
            "p_mod_4": s(p % 4), "p_minus_1_mod_l": s((p - 1) % l), "p_minus_1_mod_l_squared": s((p - 1) % (l * l)),
            "tower_symbols": symbols,
        }),
        pass: true,
    })
}

fn order_prime(p: u64, l: u64, bound: u64) -> Result<Outcome, Failure> {
    odd_prime(p, "p")?;
    odd_prime(l, "l")?;
    let q = galois::find_order_l_prime(p, l, bound)?;
    let order = crate::coeff::ntheory::multiplicative_order(q % p, p);
    Ok(Outcome { value: json!({"p": s(p), "l": s(l), "q": s(q), "order": s(order)}), pass: true })
}

fn exponents(m: usize, l: u64, box_: i64) -> Result<Outcome, Failure> {
    odd_prime(l, "l")?;
    if box_ < 1 {
        return Err(usage(format!("--box must be positive, got {box_}")));
    }
    match galois::find_generic_exponents(m, l, box_)? {
        Some(n_alpha) => {
            let data = ExponentData::new(m, n_alpha, l)?;
            let c5 = galois::check_condition5(&data);
            let value = json!({
                "m": s(m), "l": s(l), "box": s(box_), "found": true,
                "condition4": galois::check_condition4(&data), "condition5": c5, "data": data,
            });
            Ok(Outcome { value, pass: true })
        }
        None => Ok(Outcome { value: json!({"m": s(m), "l": s(l), "box": s(box_), "found": false}), pass: false }),
    }
}

fn torus_point(m: usize, l: u64, p: u64) -> Result<Outcome, Failure> {
    odd_prime(l, "l")?;
    odd_prime(p, "p")?;
    rootdata::coxeter_number(m)?;
    match galois::find_regular_torus_point(m, l, p)? {
        Some(pt) => {
            let mut v = serde_json::to_value(&pt).expect("serializable");
            v["m"] = s(m);
            v["l"] = s(l);
            v["p"] = s(p);
            v["found"] = Value::Bool(true);
            Ok(Outcome { value: v, pass: true })
        }
        None => Ok(Outcome { value: json!({"m": s(m), "l": s(l), "p": s(p), "found": false}), pass: false }),
    }
}

fn lparam(n: usize, weights: Vec<i64>) -> Result<Outcome, Failure> {
    if weights.len() != n {
        return Err(usage(format!("expected {n} weights, got {}", weights.len())));
    }
    let r = rootdata::lparam_descent(n, &weights)?;
    Ok(outcome(&r, r.descends))
}

fn execute(cmd: Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Parity { m } => {
            let r = rootdata::parity_classify(m)?;
            let value = json!({
                "m": s(r.m), "qualifies": r.qualifies, "form": r.form_type,
                "w0_order": s(r.w0_lift_order), "w0_minus_one": r.w0_minus_one,
            });
            Ok(Outcome { value, pass: r.qualifies })
        }
        Command::SignLaw { m, k } => {
            rootdata::coxeter_number(m)?;
            sign_law(m, k)
        }
        Command::Project { multivector, m } => project(&multivector, m),
        Command::InvariantForm { m } => {
            let r = spinrep::classify_invariant_form(m)?;
            Ok(outcome(&r, r.matches))
        }
        Command::Weights { m } => weights(m),
        Command::Transitivity { m } => transitivity(m),
        Command::RhoVee { m } => {
            let r = rootdata::rho_vee(m)?;
            Ok(outcome(&r, r.integral))
        }
        Command::Cartan { m } => {
            let r = rootdata::cartan_involution_check(m)?;
            Ok(outcome(&r, r.holds))
        }
        Command::Extension { n, root_type } => {
            let r = spingroup::extension_splits(n, root_type)?;
            Ok(outcome(&r, r.splits))
        }
        Command::Tower { n, bound } => {
            let t: PrimeTower = galois::prime_tower(n, bound_or_default(bound)?)?;
            let verified = t.verify();
            let mut v = serde_json::to_value(&t).expect("serializable");
            v["verified"] = Value::Bool(verified);
            Ok(Outcome { value: v, pass: verified })
        }
        Command::Pair { l, tower, bound } => pair(l, tower, bound_or_default(bound)?),
        Command::OrderPrime { p, l, bound } => order_prime(p, l, bound_or_default(bound)?),
        Command::Exponents { m, l, box_ } => exponents(m, l, box_),
        Command::TorusPoint { m, l, p } => torus_point(m, l, p),
        Command::Prop26 { m, bound } => {
            let cert = galois::prop26(m, bound_or_default(bound)?)?;
            Ok(outcome(&cert, cert.report.pass))
        }
        Command::Lparam { n, weights } => lparam(n, weights),
    }
}

/// Exit status for a library error: bad input is a usage error, everything
/// else means the requested object is absent.
fn lib_exit(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::InvalidDimension(..)
        | Error::InvalidModulus(_)
        | Error::RankMismatch(..)
        | Error::InvalidSignChange(_)
        | Error::InvalidPermutation(_) => 2,
        _ => 1,
    }
}

fn lib_message(e: &Error) -> String {
    match e {
        Error::Parse(_) => format!("malformed input: {e}"),
        Error::InvalidDimension(..) => format!("invalid m: {e}"),
        Error::BoundExhausted(_) => format!("search exhausted: {e}"),
        Error::Membership(_) => format!("not in GSpin: {e}"),
        _ => e.to_string(),
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let _ = write!(err, "{e}");
            return 2;
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&o.value)
            } else {
                serde_json::to_string(&o.value)
            }
            .expect("serializable");
            let _ = writeln!(out, "{text}");
            if o.pass {
                0
            } else {
                1
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: usage: {msg}");
            2
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {}", lib_message(&e));
            lib_exit(&e)
        }
    }
}
