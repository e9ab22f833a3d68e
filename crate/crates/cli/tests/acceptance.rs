//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Run with `cargo test -p uniqopt-cli --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use uniqopt::generate::generate;
use uniqopt::reductions::{compile, knapsack_to_hyperbolic, knapsack_to_ssg, verify_bijection, Notice};
use uniqopt::{
    achievable_values, brute_force_unique, decide_unique, integer_query_budget, rational_query_budget,
    solve_max_hyperbolic, Assignment, EnumerationOracle, Error, ExactValue, Instance, Kind, KnapsackInstance, Status,
    UniquenessReport,
};

const BOUNDS: [u64; 4] = [1, 3, 10, 50];
const SUITE1_PER_FAMILY: u64 = 1000;
const SUITE1_MAX_N: u64 = 14;
const SUITE2_SIZE: u64 = 500;
const SUITE2_MAX_N: u64 = 10;
const REFEREE_LIMIT: usize = 24;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_assignments(n: usize) -> impl Iterator<Item = Assignment> {
    (0..1u64 << n).map(move |i| Assignment::from_index(i, n))
}

struct Decided {
    kind: Kind,
    seed: u64,
    inst: Instance,
    oracle: UniquenessReport,
    brute: UniquenessReport,
}

/// Seeded random instances of every family: n cycles through 0..=14 and the
/// coefficient bound through 1, 3, 10, 50.
fn suite1() -> Result<Vec<Decided>, Error> {
    let mut out = Vec::new();
    for (f, kind) in Kind::ALL.into_iter().enumerate() {
        let oracle = EnumerationOracle::new();
        for i in 0..SUITE1_PER_FAMILY {
            let n = (i % (SUITE1_MAX_N + 1)) as usize;
            let bound = BOUNDS[((i / (SUITE1_MAX_N + 1)) % 4) as usize];
            let seed = 0x5eed_0000 + (f as u64) * 1_000_000 + i;
            let inst = generate(kind, n, bound, seed)?;
            let report = decide_unique(&inst, &oracle)?;
            let brute = brute_force_unique(&inst, REFEREE_LIMIT)?;
            out.push(Decided { kind, seed, inst, oracle: report, brute });
        }
    }
    Ok(out)
}

/// Seeded random knapsack instances with n <= 10. Every fifth instance has
/// all profits zeroed and every fifth (offset by one) has its bound pushed
/// past the total weight, so both normalizations are exercised.
fn suite2() -> Result<Vec<KnapsackInstance>, Error> {
    let mut out = Vec::new();
    for i in 0..SUITE2_SIZE {
        let n = (i % (SUITE2_MAX_N + 1)) as usize;
        let bound = BOUNDS[((i / (SUITE2_MAX_N + 1)) % 4) as usize];
        let Instance::Knapsack(k) = generate(Kind::Knapsack, n, bound, 0xb17e_0000 + i)? else { unreachable!() };
        let k = match i % 5 {
            1 => KnapsackInstance::new(k.weights().to_vec(), vec![BigInt::from(0); n], k.bound().clone())?,
            2 => KnapsackInstance::new(k.weights().to_vec(), k.profits().to_vec(), k.total_weight() + 1)?,
            _ => k,
        };
        out.push(k);
    }
    Ok(out)
}

fn referee_agreement(suite: &[Decided]) -> Check {
    let mut verdicts = [0usize; 3];
    for d in suite {
        ensure(d.oracle.same_answer(&d.brute), || {
            format!("{} seed {}: oracle {:?} vs referee {:?}", d.kind, d.seed, d.oracle, d.brute)
        })?;
        verdicts[d.brute.status as usize] += 1;
    }
    for kind in Kind::ALL {
        let count = suite.iter().filter(|d| d.kind == kind).count() as u64;
        ensure(count >= SUITE1_PER_FAMILY, || format!("only {count} {kind} instances"))?;
    }
    Ok(format!(
        "{} instances, {} unique / {} multiple / {} infeasible",
        suite.len(),
        verdicts[Status::Unique as usize],
        verdicts[Status::Multiple as usize],
        verdicts[Status::Infeasible as usize]
    ))
}

fn bijections(suite: &[KnapsackInstance]) -> Check {
    let (mut normalized, mut padded, mut checks) = (0, 0, 0);
    for (i, k) in suite.iter().enumerate() {
        let source = Instance::from(k.clone());
        for to in [Kind::SubsetSumGoal, Kind::Hyperbolic, Kind::Rank1Quadratic] {
            let c = compile(&source, to, REFEREE_LIMIT).map_err(|e| format!("instance {i} -> {to}: {e}"))?;
            let report = match c.full_map() {
                Some(map) => verify_bijection(&c.source, &c.target, &map, REFEREE_LIMIT),
                None => {
                    // Padding only happens to infeasible sources.
                    let o = uniqopt::optima(&c.source, REFEREE_LIMIT, 0).map_err(|e| e.to_string())?;
                    ensure(o.value.is_none(), || format!("instance {i}: padded a feasible instance"))?;
                    verify_bijection(&c.prepared, &c.target, &c.solution_map, REFEREE_LIMIT)
                }
            }
            .map_err(|e| format!("instance {i} -> {to}: {e}"))?;
            ensure(report.matched && report.left_optimizers == report.right_optimizers, || {
                format!("instance {i} -> {to}: {report:?}")
            })?;
            ensure(report.left_optimizers >= 1, || format!("instance {i} -> {to}: no optimizers"))?;
            checks += 1;
            if to == Kind::SubsetSumGoal {
                normalized += c.notices.contains(&Notice::ProfitNormalized) as usize;
                padded += c.notices.contains(&Notice::FeasibilityPadded) as usize;
            }
        }
    }
    ensure(suite.len() as u64 >= SUITE2_SIZE, || format!("only {} instances", suite.len()))?;
    ensure(normalized > 0 && padded > 0, || format!("normalized {normalized}, padded {padded}"))?;
    Ok(format!("{checks} checks over {} instances ({normalized} profit-normalized, {padded} padded)", suite.len()))
}

/// The knapsack each reduction is actually applied to.
fn prepared(k: &KnapsackInstance) -> Result<KnapsackInstance, String> {
    match compile(&k.clone().into(), Kind::SubsetSumGoal, REFEREE_LIMIT).map_err(|e| e.to_string())?.prepared {
        Instance::Knapsack(p) => Ok(p),
        other => Err(format!("prepared instance is {}", other.kind())),
    }
}

fn rank1_identity(suite: &[KnapsackInstance]) -> Check {
    let mut points = 0u64;
    for (i, k) in suite.iter().enumerate() {
        let ssg = knapsack_to_ssg(&prepared(k)?).map_err(|e| e.to_string())?;
        let c = compile(&ssg.clone().into(), Kind::Rank1Quadratic, REFEREE_LIMIT).map_err(|e| e.to_string())?;
        let Instance::Rank1Quadratic(r) = c.target else { return Err("wrong target".into()) };
        let (q, goal) = (ssg.weights(), ssg.goal());
        let n = q.len();
        for x in all_assignments(n + 1) {
            let f = r.eval(&x).map_err(|e| e.to_string())?;
            let s: BigInt = (0..n).filter(|&j| x.get(j)).map(|j| &q[j]).sum();
            if x.get(n) {
                let d = &s - goal;
                let want = &d * &d - goal * goal * 4;
                ensure(f == want, || format!("instance {i} x={x}: f={f}, identity gives {want}"))?;
            } else {
                ensure(f >= BigInt::from(0), || format!("instance {i} x={x}: f={f} < 0 with x_(n+1)=0"))?;
            }
            points += 1;
        }
        let mut bits = vec![false; n + 1];
        bits[n] = true;
        let f = r.eval(&Assignment::new(bits)).map_err(|e| e.to_string())?;
        let designated: BigInt = goal * goal * 3;
        ensure(f == -designated, || format!("instance {i}: designated point gives {f}"))?;
    }
    Ok(format!("{points} points over {} instances", suite.len()))
}

fn hyperbolic_cases(suite: &[KnapsackInstance]) -> Check {
    let two = ExactValue::integer(2);
    let zero = ExactValue::integer(0);
    let mut counts = [0u64; 3];
    for (i, k) in suite.iter().enumerate() {
        let p = prepared(k)?;
        let h = knapsack_to_hyperbolic(&p).map_err(|e| e.to_string())?;
        for x in all_assignments(p.len()) {
            let (w, profit) = p.eval(&x).map_err(|e| e.to_string())?;
            let f = h.eval(&x).map_err(|e| format!("instance {i} x={x}: {e}"))?;
            match w.cmp(p.bound()) {
                std::cmp::Ordering::Equal => {
                    ensure(f == ExactValue::integer(&profit + 2) && f >= two, || {
                        format!("instance {i} x={x}: feasible value {f}, profit {profit}")
                    })?;
                    counts[0] += 1;
                }
                std::cmp::Ordering::Less => {
                    ensure(f < two, || format!("instance {i} x={x}: under-weight value {f}"))?;
                    counts[1] += 1;
                }
                std::cmp::Ordering::Greater => {
                    ensure(f < zero, || format!("instance {i} x={x}: over-weight value {f}"))?;
                    counts[2] += 1;
                }
            }
        }
    }
    Ok(format!("{} feasible, {} under-weight, {} over-weight points", counts[0], counts[1], counts[2]))
}

fn ssg_intervals(suite: &[KnapsackInstance]) -> Check {
    let mut points = 0u64;
    for (i, k) in suite.iter().enumerate() {
        let p = prepared(k)?;
        let ssg = knapsack_to_ssg(&p).map_err(|e| e.to_string())?;
        let (big_q, big_p) = (ssg.goal(), p.total_profit());
        for x in all_assignments(p.len()) {
            let (w, _) = p.eval(&x).map_err(|e| e.to_string())?;
            let q = ssg.weight_of(&x).map_err(|e| e.to_string())?;
            let ok = match w.cmp(p.bound()) {
                std::cmp::Ordering::Less => q <= big_q - &big_p * 3,
                std::cmp::Ordering::Greater => q >= big_q + &big_p * 2,
                std::cmp::Ordering::Equal => big_q - &big_p <= q && &q <= big_q,
            };
            ensure(ok, || format!("instance {i} x={x}: w={w}, q={q}, Q={big_q}, P={big_p}"))?;
            points += 1;
        }
    }
    Ok(format!("{points} points over {} instances", suite.len()))
}

fn query_budgets(suite: &[Decided]) -> Check {
    let mut worst = (0u64, 0u64);
    for d in suite {
        let s = d.inst.value_bound();
        let budget = if d.inst.is_integral() { integer_query_budget(&s) } else { rational_query_budget(&s) };
        let stats = d.oracle.stats;
        ensure(stats.threshold_queries <= budget, || {
            format!("{} seed {}: {} threshold queries, budget {budget}", d.kind, d.seed, stats.threshold_queries)
        })?;
        ensure(stats.witness_queries == 1, || {
            format!("{} seed {}: {} two-witness queries", d.kind, d.seed, stats.witness_queries)
        })?;
        if stats.threshold_queries > worst.0 {
            worst = (stats.threshold_queries, budget);
        }
    }
    Ok(format!("{} decisions, most threshold queries {} (budget {})", suite.len(), worst.0, worst.1))
}

fn rational_exactness(suite: &[Decided]) -> Check {
    let (mut instances, mut gaps) = (0, 0u64);
    for d in suite.iter().filter(|d| d.kind == Kind::Hyperbolic && d.inst.dimension() <= 12) {
        let Instance::Hyperbolic(h) = &d.inst else { unreachable!() };
        let s = h.coefficient_sum();
        let values = achievable_values(&d.inst, REFEREE_LIMIT).map_err(|e| e.to_string())?;
        if s > BigInt::from(0) {
            let min_gap = ExactValue::ratio(1, &s * &s).map_err(|e| e.to_string())?;
            for pair in values.windows(2) {
                let gap = pair[1].as_rational() - pair[0].as_rational();
                ensure(&gap >= min_gap.as_rational(), || {
                    format!("seed {}: values {} and {} closer than 1/S^2 with S={s}", d.seed, pair[0], pair[1])
                })?;
                gaps += 1;
            }
        }
        let solved = solve_max_hyperbolic(&d.inst, &EnumerationOracle::new());
        match (solved, values.last()) {
            (Ok(opt), Some(best)) => {
                let exact = opt.value.numer() == best.numer() && opt.value.denom() == best.denom();
                ensure(exact && d.brute.optimal_value.as_ref() == Some(best), || {
                    format!("seed {}: solved {} but referee has {best}", d.seed, opt.value)
                })?;
                ensure(h.eval(&opt.witness).ok().as_ref() == Some(best), || format!("seed {}: bad witness", d.seed))?;
            }
            (Err(Error::NoFeasiblePoint), None) => {}
            (other, best) => return Err(format!("seed {}: solver {other:?}, referee {best:?}", d.seed)),
        }
        instances += 1;
    }
    ensure(instances > 0, || "no hyperbolic instances".into())?;
    Ok(format!("{instances} hyperbolic instances, {gaps} adjacent value gaps"))
}

fn cli_golden() -> Check {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut runs = 0;
    for (name, code) in [("unique", 0), ("multiple", 1), ("infeasible", 2)] {
        let want = std::fs::read(golden.join(format!("{name}.decide.out"))).map_err(|e| e.to_string())?;
        let input = golden.join(format!("{name}.json"));
        for _ in 0..2 {
            let out = Command::new(env!("CARGO_BIN_EXE_uniqopt"))
                .args(["decide", "--in"])
                .arg(&input)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.code() == Some(code), || format!("{name}: exit {:?}, want {code}", out.status.code()))?;
            ensure(out.stdout == want, || format!("{name}: output differs from golden file"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} runs byte-identical to golden files with exit codes 0/1/2"))
}

/// `setup` is time already spent on shared work this criterion depends on.
fn report(number: usize, title: &str, setup: f64, check: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    let secs = setup + start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => {
            println!("PASS [{number}] {title}: {detail} ({secs:.1}s)");
            true
        }
        Err(detail) => {
            println!("FAIL [{number}] {title}: {detail} ({secs:.1}s)");
            false
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let decided = suite1();
    let s1_secs = start.elapsed().as_secs_f64();
    let knapsacks = suite2();
    let fail = |e: &Error| -> Check { Err(format!("suite generation failed: {e}")) };
    let s1 = |f: fn(&[Decided]) -> Check| match &decided {
        Ok(s) => f(s),
        Err(e) => fail(e),
    };
    let s2 = |f: fn(&[KnapsackInstance]) -> Check| match &knapsacks {
        Ok(s) => f(s),
        Err(e) => fail(e),
    };

    let results = [
        report(1, "referee agreement", s1_secs, || s1(referee_agreement)),
        report(2, "reduction bijections", 0.0, || s2(bijections)),
        report(3, "rank-1 identity and case bounds", 0.0, || s2(rank1_identity)),
        report(4, "hyperbolic case analysis", 0.0, || s2(hyperbolic_cases)),
        report(5, "subset-sum interval bounds", 0.0, || s2(ssg_intervals)),
        report(6, "query budgets", 0.0, || s1(query_budgets)),
        report(7, "rational exactness and spacing", 0.0, || s1(rational_exactness)),
        report(8, "CLI determinism and exit protocol", 0.0, cli_golden),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} criteria passed in {:.1}s", results.len(), start.elapsed().as_secs_f64());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
