//! Acceptance suite. Runs every criterion and prints one PASS/FAIL line
//! each; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use ordhom::brute::{core_brute, hom_exists_brute, hom_search, is_core_brute, Guards, Permutation};
use ordhom::collapse::{hom_to_matching_fpt, hom_to_matching_fpt_colored};
use ordhom::cores::matching_core;
use ordhom::factor::hom_h0_fpt;
use ordhom::generate::{enumerate_all, enumeration_count, generate, generate_graph, EnumFamily, Family, GenSpec, Instance};
use ordhom::reduction::{perm_to_gadget_matching, verify_reduction_hom, verify_reduction_sub};
use ordhom::{check_hom, Error, OrderedGraph, OrderedMatching};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn perms_up_to(k: usize) -> Vec<Permutation> {
    (1..=k)
        .flat_map(|size| enumerate_all(&EnumFamily::Permutations { size }).unwrap())
        .filter_map(Instance::into_permutation)
        .collect()
}

fn matchings_up_to(k: usize) -> Vec<OrderedGraph> {
    let mut out = vec![OrderedGraph::empty(0)];
    for edges in 1..=k {
        out.extend(
            enumerate_all(&EnumFamily::Matchings { edges })
                .unwrap()
                .filter_map(Instance::into_graph),
        );
    }
    out
}

fn factors_up_to(template: &OrderedGraph, copies: usize) -> Vec<OrderedGraph> {
    (0..=copies)
        .flat_map(|c| {
            enumerate_all(&EnumFamily::H0Factors {
                template: template.clone(),
                copies: c,
            })
            .unwrap()
            .filter_map(Instance::into_graph)
        })
        .collect()
}

fn random_perm(seed: u64, size: usize) -> Permutation {
    generate(&GenSpec {
        seed,
        family: Family::Permutation { size },
    })
    .unwrap()
    .into_permutation()
    .unwrap()
}

fn criterion_1() -> Verdict {
    let patterns = perms_up_to(3);
    let hosts = perms_up_to(6);
    let mut yes = 0;
    for pi in &patterns {
        for host in &hosts {
            let v = verify_reduction_sub(pi, host).map_err(|e| e.to_string())?;
            if !v.agrees() {
                return Err(format!("pattern {pi} in {host}: {v:?}"));
            }
            yes += usize::from(v.pattern);
        }
    }
    Ok(format!(
        "{} patterns x {} hosts agree ({yes} contained)",
        patterns.len(),
        hosts.len()
    ))
}

fn criterion_2() -> Verdict {
    let check = |pi: &Permutation, host: &Permutation| -> Result<bool, String> {
        let v = verify_reduction_hom(pi, host).map_err(|e| e.to_string())?;
        if !v.agrees() {
            return Err(format!("pattern {pi} in {host}: {v:?}"));
        }
        Ok(v.pattern)
    };
    let mut yes = 0;
    let mut exhaustive = 0;
    for pi in perms_up_to(2) {
        for host in perms_up_to(4) {
            yes += usize::from(check(&pi, &host)?);
            exhaustive += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let random = 240u64;
    for i in 0..random {
        let k = rng.gen_range(1..=3);
        let big = rng.gen_range(k..=5);
        yes += usize::from(check(&random_perm(2 * i, k), &random_perm(2 * i + 1, big))?);
    }
    Ok(format!("{exhaustive} exhaustive + {random} random pairs agree ({yes} contained)"))
}

fn criterion_3() -> Verdict {
    let mut count = 0;
    for p in perms_up_to(6) {
        let k = p.len();
        let gm = perm_to_gadget_matching(&p);
        let g = &gm.graph;
        if g.n() != 6 * k || g.edge_count() != 3 * k || !g.is_matching() {
            return Err(format!("{p}: n={} edges={}", g.n(), g.edge_count()));
        }
        if gm.permutation_edges.len() + gm.auxiliary_edges.len() != g.edge_count() {
            return Err(format!("{p}: edge classes do not cover the graph"));
        }
        if let Some(&(a, b)) = gm.auxiliary_edges.iter().find(|&&(a, b)| b != a + 1) {
            return Err(format!("{p}: auxiliary edge ({a}, {b}) not adjacent"));
        }
        for &(u, v) in &gm.permutation_edges {
            let inside = gm.auxiliary_edges.iter().filter(|&&(a, b)| u < a && b < v).count();
            if inside < 2 {
                return Err(format!("{p}: only {inside} auxiliary edges inside ({u}, {v})"));
            }
        }
        count += 1;
    }
    Ok(format!("{count} gadgets, k <= 6"))
}

/// Shrinks a disagreeing pair by deleting vertices of `g` and edges of
/// `m` while the disagreement persists.
fn minimize(
    mut g: OrderedGraph,
    mut m: OrderedGraph,
    disagree: impl Fn(&OrderedGraph, &OrderedGraph) -> bool,
) -> (OrderedGraph, OrderedGraph) {
    loop {
        let smaller_g = (0..g.n()).map(|drop| {
            let keep: Vec<usize> = (0..g.n()).filter(|&v| v != drop).collect();
            g.induced_subgraph(&keep)
        });
        if let Some(next) = smaller_g.into_iter().find(|x| disagree(x, &m)) {
            g = next;
            continue;
        }
        let smaller_m = m.edges().iter().map(|&(a, b)| {
            let keep: Vec<usize> = (0..m.n()).filter(|&v| v != a && v != b).collect();
            m.induced_subgraph(&keep)
        });
        if let Some(next) = smaller_m.into_iter().find(|y| disagree(&g, y)) {
            m = next;
            continue;
        }
        return (g, m);
    }
}

fn fpt_disagrees(g: &OrderedGraph, m: &OrderedGraph, colored: bool) -> Option<String> {
    let mm = OrderedMatching::new(m.clone()).ok()?;
    let fast = if colored {
        hom_to_matching_fpt_colored(g, &mm)
    } else {
        hom_to_matching_fpt(g, &mm)
    };
    let slow = hom_exists_brute(g, m).ok()?;
    if let Some(f) = &fast {
        if !check_hom(g, m, f).unwrap_or(false) {
            return Some(format!("witness {f} fails check_hom"));
        }
    }
    (fast.is_some() != slow.is_some()).then(|| format!("fpt={} brute={}", fast.is_some(), slow.is_some()))
}

fn compare_fpt(pairs: &[(OrderedGraph, OrderedGraph)], colored: bool) -> Result<usize, String> {
    let mut yes = 0;
    for (g, m) in pairs {
        if let Some(why) = fpt_disagrees(g, m, colored) {
            let (g, m) = minimize(g.clone(), m.clone(), |x, y| fpt_disagrees(x, y, colored).is_some());
            return Err(format!("{why}; minimized counterexample G={g:?} M={m:?}"));
        }
        yes += usize::from(hom_exists_brute(g, m).unwrap().is_some());
    }
    Ok(yes)
}

fn random_matching(seed: u64, rng: &mut ChaCha8Rng, max_edges: usize) -> OrderedGraph {
    let family = Family::RandomMatching {
        edges: rng.gen_range(1..=max_edges),
        crossing_bias: rng.gen_range(0.0..=1.0),
    };
    generate_graph(seed, family).unwrap()
}

fn inflated(seed: u64, rng: &mut ChaCha8Rng, core: OrderedGraph, max_n: usize, isolated: usize) -> OrderedGraph {
    let room = max_n - core.n() - isolated;
    let steps = rng.gen_range(0..=room);
    generate_graph(seed, Family::Inflate { core, steps, isolated }).unwrap()
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pairs = Vec::new();
    for i in 0..2000u64 {
        let seed = 10_000 + i;
        let g = match i % 4 {
            0 => {
                let n = rng.gen_range(1..=10);
                let edge_prob = [0.15, 0.3, 0.5][rng.gen_range(0..3)];
                generate_graph(seed, Family::RandomGraph { n, edge_prob }).unwrap()
            }
            1 => {
                let core = random_matching(seed, &mut rng, 3);
                inflated(seed, &mut rng, core, 10, 0)
            }
            2 => {
                let core = random_matching(seed, &mut rng, 3);
                let isolated = rng.gen_range(1..=2);
                inflated(seed, &mut rng, core, 10, isolated)
            }
            _ => random_matching(seed, &mut rng, 5),
        };
        let m = random_matching(seed ^ 0x5eed, &mut rng, 3);
        pairs.push((g, m));
    }
    let random_yes = compare_fpt(&pairs, false)?;
    let all = matchings_up_to(3);
    let exhaustive: Vec<_> = all.iter().cartesian_product(&all).map(|(a, b)| (a.clone(), b.clone())).collect();
    let exhaustive_yes = compare_fpt(&exhaustive, false)?;
    Ok(format!(
        "{} stratified ({random_yes} yes) + {} exhaustive ({exhaustive_yes} yes), 0 discrepancies",
        pairs.len(),
        exhaustive.len()
    ))
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pairs = Vec::new();
    for i in 0..600u64 {
        let seed = 50_000 + i;
        let palette = rng.gen_range(1..=3);
        let colored_matching = |seed: u64, rng: &mut ChaCha8Rng| {
            let base = Family::RandomMatching {
                edges: rng.gen_range(1..=3),
                crossing_bias: rng.gen_range(0.0..=1.0),
            };
            generate_graph(
                seed,
                Family::Colored {
                    base: Box::new(base),
                    palette,
                },
            )
            .unwrap()
        };
        let g = if i % 3 == 0 {
            let n = rng.gen_range(2..=10);
            let base = Family::RandomGraph { n, edge_prob: 0.3 };
            generate_graph(
                seed,
                Family::Colored {
                    base: Box::new(base),
                    palette,
                },
            )
            .unwrap()
        } else {
            let core = colored_matching(seed, &mut rng);
            inflated(seed, &mut rng, core, 10, usize::from(i % 3 == 2))
        };
        let m = colored_matching(seed ^ 0xc0102, &mut rng);
        if g.edge_count() == 0 {
            continue;
        }
        pairs.push((g, m));
    }
    let yes = compare_fpt(&pairs, true)?;
    if pairs.len() < 500 {
        return Err(format!("only {} colored instances", pairs.len()));
    }
    Ok(format!("{} colored instances ({yes} yes), 0 discrepancies", pairs.len()))
}

fn criterion_6() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    let mut certified = 0;
    let mut seed = 60_000;
    while checked < 320 {
        seed += 1;
        let core = random_matching(seed, &mut rng, 3);
        let isolated = rng.gen_range(0..=1);
        let g = inflated(seed, &mut rng, core, 14, isolated);
        let brute = core_brute(&g).map_err(|e| e.to_string())?;
        if !brute.is_matching() {
            continue;
        }
        let report = matching_core(&g).ok_or_else(|| format!("no matching core for {g:?}"))?;
        if !report.core.ordered_isomorphic(&brute) {
            return Err(format!("{g:?}: collapse core {:?} vs brute {brute:?}", report.core));
        }
        if !report.witnesses_hold(&g).map_err(|e| e.to_string())? {
            return Err(format!("{g:?}: witnesses fail"));
        }
        if report.core.n() <= 12 {
            if !is_core_brute(&report.core).map_err(|e| e.to_string())? {
                return Err(format!("{g:?}: collapse output is not a core"));
            }
            certified += 1;
        }
        checked += 1;
    }
    Ok(format!("{checked} inflate instances, {certified} certified cores"))
}

fn criterion_7() -> Verdict {
    let k2 = OrderedGraph::new(2, [(0, 1)]).unwrap();
    let all = matchings_up_to(3);
    for (g, m) in all.iter().cartesian_product(&all) {
        let a = hom_h0_fpt(g, &k2, m).map_err(|e| e.to_string())?.is_some();
        let b = hom_to_matching_fpt(g, &OrderedMatching::new(m.clone()).unwrap()).is_some();
        if a != b {
            return Err(format!("K2 template: {g:?} -> {m:?}: factor={a} matching={b}"));
        }
    }
    let p3 = OrderedGraph::new(3, [(0, 1), (1, 2)]).unwrap();
    let factors = factors_up_to(&p3, 3);
    let mut yes = 0;
    for (g, h) in factors.iter().cartesian_product(&factors) {
        let fast = hom_h0_fpt(g, &p3, h).map_err(|e| e.to_string())?;
        let slow = hom_exists_brute(g, h).map_err(|e| e.to_string())?;
        if fast.is_some() != slow.is_some() {
            return Err(format!("P3 template: {g:?} -> {h:?}: factor={} brute={}", fast.is_some(), slow.is_some()));
        }
        if let Some(f) = fast {
            if !check_hom(g, h, &f).unwrap() {
                return Err(format!("P3 template: witness {f} fails"));
            }
            yes += 1;
        }
    }
    Ok(format!(
        "K2: {} pairs; P3: {} x {} factor pairs ({yes} yes)",
        all.len() * all.len(),
        factors.len(),
        factors.len()
    ))
}

fn criterion_8() -> Verdict {
    let m = OrderedGraph::new(6, [(0, 3), (1, 5), (2, 4)]).unwrap();
    let mm = OrderedMatching::new(m.clone()).unwrap();
    let sub = OrderedGraph::new(4, [(0, 3), (1, 2)]).unwrap();
    let limit = Duration::from_secs(5);
    let mut notes = Vec::new();
    for (label, core, expect_yes) in [
        ("yes", sub, true),
        ("no", OrderedGraph::new(6, [(0, 1), (2, 3), (4, 5)]).unwrap(), false),
    ] {
        let g = generate_graph(
            8,
            Family::Inflate {
                steps: 10_000 - core.n(),
                core,
                isolated: 0,
            },
        )
        .unwrap();
        if g.n() != 10_000 {
            return Err(format!("generated {} vertices", g.n()));
        }
        let start = Instant::now();
        let witness = hom_to_matching_fpt(&g, &mm);
        let elapsed = start.elapsed();
        if witness.is_some() != expect_yes {
            return Err(format!("{label} instance answered {}", witness.is_some()));
        }
        if let Some(f) = &witness {
            if !check_hom(&g, &m, f).unwrap() {
                return Err("witness fails check_hom".into());
            }
        }
        if elapsed >= limit {
            return Err(format!("{label} instance took {elapsed:?}"));
        }
        match hom_search(&g, &m, &Guards::default()) {
            Err(Error::SizeLimitExceeded { .. }) => {}
            other => return Err(format!("brute search was not declined: {other:?}")),
        }
        notes.push(format!("{label} in {:.0?} ({} edges)", elapsed, g.edge_count()));
    }
    Ok(format!("n = 10000: {}; brute declined by guard", notes.join(", ")))
}

fn criterion_9() -> Verdict {
    let expected = [1u128, 3, 15, 105, 945];
    for (k, &want) in (1..=5).zip(&expected) {
        let fam = EnumFamily::Matchings { edges: k };
        let got = enumerate_all(&fam).map_err(|e| e.to_string())?.count() as u128;
        if got != want || enumeration_count(&fam) != want {
            return Err(format!("{k}-edge matchings: {got}, expected {want}"));
        }
    }
    for k in 1..=6usize {
        let want: usize = (1..=k).product();
        let got = enumerate_all(&EnumFamily::Permutations { size: k })
            .map_err(|e| e.to_string())?
            .count();
        if got != want {
            return Err(format!("permutations of {k}: {got}, expected {want}"));
        }
    }
    Ok("matchings 1, 3, 15, 105, 945; permutations 1!..6!".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("containment reduction: three-way agreement", criterion_1),
        ("homomorphism reduction: pattern vs gadget hom", criterion_2),
        ("gadget structure", criterion_3),
        ("matching solver vs brute oracle", criterion_4),
        ("colored matching solver vs brute oracle", criterion_5),
        ("matching core vs brute core", criterion_6),
        ("factor solver vs matching solver and brute oracle", criterion_7),
        ("10k-vertex scaling and guard refusal", criterion_8),
        ("enumeration counts", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
