//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proofleg::codegen::{
    generate_script, generate_script_with_thesis, render_script, structure_of, RenderStyle,
};
use proofleg::corpus;
use proofleg::fixtures;
use proofleg::frontend::parse_mizar_lite;
use proofleg::metrics::{analyze, has_e1_shortcut, reasoning_partition, Evaluator, LabelRule};
use proofleg::mil::{
    enumerate_optima, mil5_miz_polynomial, solve_ahp, solve_exact, solve_lexicographic, Criterion,
    SolveMode,
};
use proofleg::order::{count_topo_orders, enumerate_topo_orders, TopoOrder};
use proofleg::reductions::{
    build_gadget, fas_from_partition, fas_to_ahp, normalize_orientation_traced, partition_from_fas,
    solve_fas_exact, solve_vc_exact, vc_to_mil5,
};
use proofleg::{Digraph, ProofGraph, Vertex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))
}

fn c1() -> Outcome {
    let start = Instant::now();
    let n = count_topo_orders(&fixtures::fig6(), None).map_err(e)?;
    ensure(n == 359_598, || format!("{n} orders"))?;
    within(Duration::from_secs(5), start)?;
    Ok(format!("{n} orders in {:.2?}", start.elapsed()))
}

fn c2() -> Outcome {
    let g = fixtures::fig6();
    let r = solve_exact(&g, Criterion::ThenPaths, SolveMode::Exhaustive, None).map_err(e)?;
    let then = g.vertex_count() - r.best_value;
    let optima = r.optima_count.unwrap_or(0);
    ensure(r.best_value == 5 && then == 12 && optima == 16, || {
        format!("paths {} then {then} optima {optima}", r.best_value)
    })?;
    Ok(format!("paths 5, then 12, {optima} optimal orders"))
}

fn c3() -> Outcome {
    let g = fixtures::fig6();
    let r =
        solve_lexicographic(&g, &[Criterion::ThenPaths, Criterion::CrossRefs], None).map_err(e)?;
    ensure(r.values == [5, 5] && r.optima_count == 6, || {
        format!("values {:?}, {} optima", r.values, r.optima_count)
    })?;
    Ok("cross 5 in 6 of the 16".into())
}

fn metrics_of(g: &ProofGraph, t: &TopoOrder) -> proofleg::LinearizationMetrics {
    analyze(g, t).expect("optimal orders are valid")
}

fn c4() -> Outcome {
    let g = fixtures::fig6();
    let (best, orders) = enumerate_optima(&g, Criterion::SumDistance, None).map_err(e)?;
    ensure(best == 38 && orders.len() == 2, || {
        format!("best {best}, {} optima", orders.len())
    })?;
    let tau = fixtures::TAU_FIG8.to_vec();
    let others: Vec<_> = orders
        .iter()
        .filter(|t| t.sequence() != tau.as_slice())
        .collect();
    ensure(others.len() == 1, || {
        "fig. 8 order is not among the optima".into()
    })?;
    let then = metrics_of(&g, others[0]).then_count;
    ensure(then == 11, || {
        format!("other optimum has {then} then-steps")
    })?;
    Ok("sum 38 in 2 orders; the other one has 11 then-steps".into())
}

fn c5() -> Outcome {
    let g = fixtures::fig6();
    let (best, orders) = enumerate_optima(&g, Criterion::LabelsPlain, None).map_err(e)?;
    ensure(best == 3 && orders.len() == 8, || {
        format!("best {best}, {} optima", orders.len())
    })?;
    let ms: Vec<_> = orders.iter().map(|t| metrics_of(&g, t)).collect();
    let min_sum = ms.iter().map(|m| m.sum_distance).min().unwrap();
    let max_then = ms.iter().map(|m| m.then_count).max().unwrap();
    ensure(min_sum == 41 && max_then == 12, || {
        format!("min sum {min_sum}, max then {max_then}")
    })?;
    Ok("labels 3 in 8 orders; min sum 41; some order has 12 then-steps".into())
}

fn c6() -> Outcome {
    let g = fixtures::fig6();
    let (best, orders) = enumerate_optima(&g, Criterion::MaxDistance, None).map_err(e)?;
    ensure(best == 5 && orders.len() == 128, || {
        format!("best {best}, {} optima", orders.len())
    })?;
    let ms: Vec<_> = orders.iter().map(|t| metrics_of(&g, t)).collect();
    let then = ms.iter().map(|m| m.then_count).max().unwrap();
    let cross = ms.iter().map(|m| m.cross_ref_count).min().unwrap();
    let sum = ms.iter().map(|m| m.sum_distance).min().unwrap();
    let labels = ms.iter().map(|m| m.label_count_plain).min().unwrap();
    ensure(then <= 12 && cross >= 7 && sum >= 39 && labels >= 6, || {
        format!("then<={then} cross>={cross} sum>={sum} labels>={labels}")
    })?;
    Ok(format!(
        "max 5 in 128 orders; then<={then} cross>={cross} sum>={sum} labels>={labels}"
    ))
}

fn c7() -> Outcome {
    let g = fixtures::fig6();
    let t = TopoOrder::new(&g, fixtures::TAU_FIG8.to_vec()).map_err(e)?;
    let m = analyze(&g, &t).map_err(e)?;
    let got = (
        m.then_count,
        m.path_count,
        m.cross_ref_count,
        m.sum_distance,
        m.max_distance,
        m.label_count_plain,
    );
    ensure(got == (12, 5, 5, 38, 7, 4), || format!("{got:?}"))?;
    Ok("then 12, paths 5, cross 5, sum 38, max 7, labels 4".into())
}

fn c8() -> Outcome {
    let start = Instant::now();
    for m in 1..=2 {
        let (g, c) = build_gadget(m);
        let r = solve_ahp(&g, SolveMode::Exhaustive, None).map_err(e)?;
        let found: BTreeSet<Vec<Vec<Vertex>>> = r
            .optimal_partitions
            .unwrap_or_default()
            .into_iter()
            .map(|p| p.into_blocks())
            .collect();
        let sorted = |mut v: Vec<Vec<Vertex>>| {
            v.sort();
            v
        };
        let expect = BTreeSet::from([sorted(c.rows(1)), sorted(c.columns(1))]);
        ensure(r.best_value == m + 1 && found == expect, || {
            format!(
                "m={m}: minimum {}, {} optimal partitions",
                r.best_value,
                found.len()
            )
        })?;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!(
        "m=1,2: minimum m+1, optima rows and columns ({:.2?})",
        start.elapsed()
    ))
}

fn all_feedback_sets(dg: &Digraph) -> Vec<BTreeSet<(Vertex, Vertex)>> {
    let arcs: Vec<_> = dg.arcs().iter().copied().collect();
    (0u32..1 << arcs.len())
        .map(|s| {
            (0..arcs.len())
                .filter(|k| s >> k & 1 == 1)
                .map(|k| arcs[k])
                .collect::<BTreeSet<_>>()
        })
        .filter(|f| dg.without_arcs(f).is_acyclic())
        .collect()
}

fn c9() -> Outcome {
    let two = Digraph::new(2, [(1, 2), (2, 1)]).map_err(e)?;
    let fig5_numbering = [(1, 2), (2, 3), (3, 1), (1, 3)];
    let fig5 = Digraph::new(3, fig5_numbering).map_err(e)?;
    let mut checked = 0;
    for (src, numbering) in [(&two, None), (&fig5, Some(&fig5_numbering[..]))] {
        let a = fas_to_ahp(src, numbering).map_err(e)?;
        for f in all_feedback_sets(src) {
            let p = partition_from_fas(&a.instance, &a.roles, &f).map_err(e)?;
            let back = fas_from_partition(&a.instance, &a.roles, &p).map_err(e)?;
            ensure(back == f, || format!("{f:?} came back as {back:?}"))?;
            checked += 1;
        }
    }

    let a = fas_to_ahp(&two, None).map_err(e)?;
    let r = solve_exact(
        &a.instance,
        Criterion::ThenPaths,
        SolveMode::BranchAndBound,
        None,
    )
    .map_err(e)?;
    let min_fas = solve_fas_exact(&two).map_err(e)?.len();
    ensure(
        r.best_value == 7 && r.best_value == a.roles.offset() + min_fas,
        || format!("min partition {}, min FAS {min_fas}", r.best_value),
    )?;

    // repair statistics over random partitions of D(2-cycle)
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let all_ref = a.instance.all_reference();
    let (mut total, mut most) = (0, 0);
    let samples = 200;
    for _ in 0..samples {
        let t =
            TopoOrder::new(&a.instance, corpus::random_order(&mut rng, &a.instance)).map_err(e)?;
        let p = reasoning_partition(&all_ref, &t).map_err(e)?;
        let (_, report) = normalize_orientation_traced(&a.instance, &a.roles, &p).map_err(e)?;
        total += report.iterations;
        most = most.max(report.iterations);
    }
    Ok(format!(
        "{checked} round trips; min partition 7 = 6 + {min_fas}; repair iterations over {samples} samples: total {total}, max {most}"
    ))
}

fn c10() -> Outcome {
    let graphs = corpus::connected_graphs(5);
    ensure(graphs.len() >= 30, || {
        format!("only {} graphs", graphs.len())
    })?;
    for ug in &graphs {
        let a = vc_to_mil5(ug);
        let labels = solve_exact(
            &a.instance,
            Criterion::LabelsPlain,
            SolveMode::Exhaustive,
            None,
        )
        .map_err(e)?
        .best_value;
        let cover = solve_vc_exact(ug).map_err(e)?.len();
        ensure(labels == cover, || {
            format!("{ug:?}: labels {labels}, cover {cover}")
        })?;
    }
    Ok(format!("{} connected graphs", graphs.len()))
}

fn c11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let count = 500;
    for _ in 0..count {
        let g = corpus::random_proof_graph(&mut rng, 1..=7, 0.4, 0.6);
        let d = mil5_miz_polynomial(&g);
        let best = solve_exact(&g, Criterion::LabelsMiz, SolveMode::Exhaustive, None)
            .map_err(e)?
            .best_value;
        let witness = metrics_of(&g, &d.witness).label_count_miz;
        ensure(d.label_count == best && witness == best, || {
            format!(
                "{g:?}: polynomial {}, witness {witness}, exhaustive {best}",
                d.label_count
            )
        })?;
    }
    Ok(format!("{count} random DAGs"))
}

fn normalized_lines(s: &str) -> Vec<String> {
    s.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|l| !l.is_empty())
        .collect()
}

fn c12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let count = 200;
    for _ in 0..count {
        let g = corpus::random_scriptable_graph(&mut rng, 1..=9, 0.4, 0.6);
        let t = TopoOrder::new(&g, corpus::random_order(&mut rng, &g)).map_err(e)?;
        let s = generate_script(&g, &t, true).map_err(e)?;
        let h = structure_of(&s).map_err(e)?;
        ensure(g.is_isomorphic_via(&h, |v| t.position(v)), || {
            format!("round trip changed {g:?}")
        })?;
    }

    let g = fixtures::fig11();
    let s = generate_script_with_thesis(&g, &TopoOrder::identity(7), 7, true).map_err(e)?;
    let ours = normalized_lines(&render_script(&s, RenderStyle::Verbose, LabelRule::Plain));
    let listing = normalized_lines(fixtures::FIG11_LISTING);
    if ours != listing {
        let k = ours
            .iter()
            .zip(&listing)
            .position(|(a, b)| a != b)
            .unwrap_or(ours.len().min(listing.len()));
        return Err(format!(
            "{count} round trips ok; golden listing differs at line {}: expected {:?}, generated {:?}",
            k + 1,
            listing.get(k).map(String::as_str).unwrap_or(""),
            ours.get(k).map(String::as_str).unwrap_or("")
        ));
    }
    Ok(format!("{count} round trips; golden listing matches"))
}

fn c13() -> Outcome {
    let p = parse_mizar_lite(fixtures::FIG5_MIZ).map_err(e)?;
    let g = fixtures::fig6();
    ensure(p.graph.is_isomorphic_via(&g, |v| v), || {
        "graphs differ".into()
    })?;
    Ok(format!(
        "{} steps, {} arcs",
        p.graph.vertex_count(),
        p.graph.arc_count()
    ))
}

/// Recounts paths and internal references from scratch for every order.
fn conservation(g: &ProofGraph) -> Result<u64, String> {
    let n = g.vertex_count();
    let e1 = g.reference_arc_count();
    let shortcut_free = !has_e1_shortcut(g);
    let mut eval = Evaluator::new(g);
    let mut bad = None;
    let count = enumerate_topo_orders(g, Some(1_000_000), |seq| {
        if bad.is_some() {
            return;
        }
        let m = eval.eval(seq);
        let mut block = vec![0usize; n + 1];
        let mut paths = 0;
        for (k, &v) in seq.iter().enumerate() {
            if k == 0 || !g.is_reference_arc(seq[k - 1], v) {
                paths += 1;
            }
            block[v] = paths;
        }
        let internal = g
            .reference_arcs()
            .filter(|&(a, b)| block[a] == block[b])
            .count();
        let ok = m.then_count + m.path_count == n
            && m.path_count == paths
            && m.cross_ref_count + internal == e1
            && (!shortcut_free || n - m.path_count == e1 - m.cross_ref_count);
        if !ok {
            bad = Some(seq.to_vec());
        }
    })
    .map_err(e)?;
    match bad {
        Some(seq) => Err(format!("violated by {seq:?} on {g:?}")),
        None => Ok(count),
    }
}

fn c14() -> Outcome {
    let mut orders = conservation(&fixtures::fig2())? + conservation(&fixtures::fig6())?;
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut shortcut_free = 0;
    for _ in 0..100 {
        let g = corpus::random_proof_graph(&mut rng, 1..=9, 0.35, 0.6);
        shortcut_free += usize::from(!has_e1_shortcut(&g));
        orders += conservation(&g)?;
    }
    Ok(format!(
        "{orders} orders checked; {shortcut_free} of 100 random DAGs shortcut-free"
    ))
}

type Check = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Check; 14] = [
        (1, "linear extensions of fig6", c1),
        (2, "then-step optimum", c2),
        (3, "lexicographic then, cross", c3),
        (4, "sum-distance optimum", c4),
        (5, "label optimum", c5),
        (6, "max-distance optimum", c6),
        (7, "fixed-order metrics", c7),
        (8, "gadget law", c8),
        (9, "reduction round trips", c9),
        (10, "vertex cover to labels", c10),
        (11, "polynomial label minimizer", c11),
        (12, "script generation", c12),
        (13, "mizar-lite extraction", c13),
        (14, "conservation invariants", c14),
    ];
    let mut failed = 0;
    for (k, name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {k:>2} PASS  {name}: {detail} [{took:.2?}]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {k:>2} FAIL  {name}: {detail} [{took:.2?}]");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
