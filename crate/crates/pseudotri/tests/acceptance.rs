//! Acceptance run: one PASS/FAIL line per criterion. Runs without the libtest
//! harness so the lines always reach the output.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use pseudotri::cluster::{all_cluster_variables, exchange_relation, pair_weights, quiver, FlipShape, Seed};
use pseudotri::coxeter::{accordion, coxeter_elements, SubwordComplex};
use pseudotri::geometry::{Chord, CsPair, Dn, Side};
use pseudotri::laurent::LaurentPoly;
use pseudotri::matching::{openings, variable_via_matching_in, Opening};
use rand::{RngExt, SeedableRng};

type Outcome = Result<String, String>;

fn s(p: usize, q: usize) -> Chord {
    Chord::Straight { p, q }
}

fn c(p: usize, side: Side) -> Chord {
    Chord::Central { p, side }
}

fn xyz() -> Vec<String> {
    vec!["x".into(), "y".into(), "z".into()]
}

fn poly(text: &str) -> LaurentPoly {
    LaurentPoly::parse(text, &xyz()).unwrap()
}

fn rat(num: &str, den: &str) -> LaurentPoly {
    poly(num).div_exact(&poly(den)).unwrap()
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Index of the initial variable a seed pair carries, read off its monomial.
fn variable_index(x: &LaurentPoly) -> usize {
    let (m, _) = x.terms().next().unwrap();
    m.iter().position(|&e| e == 1).unwrap()
}

fn enumeration_counts() -> Outcome {
    let start = Instant::now();
    let mut seen = vec![];
    for (n, want) in [(3usize, 14usize), (4, 50), (5, 182), (6, 672)] {
        let dn = Dn::new(n).unwrap();
        let g = dn.enumerate(4);
        let oracle = common::catalan_d(n as u64) as usize;
        check(oracle == want, || format!("Catalan oracle gives {} for n = {}", oracle, n))?;
        check(g.nodes.len() == want, || format!("{} nodes for n = {}", g.nodes.len(), n))?;
        for i in 0..g.nodes.len() {
            check(g.degree(i) == n, || format!("node {} has degree {} for n = {}", i, g.degree(i), n))?;
        }
        seen.push(g.nodes.len().to_string());
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 10.0, || format!("took {:.2}s", secs))?;
    Ok(format!("{} nodes, each n-regular, in {:.2}s", seen.join("/"), secs))
}

fn printed_variables() -> Outcome {
    let dn = Dn::new(3).unwrap();
    let chords = [c(1, Side::R), c(0, Side::R), s(1, 3)];
    let t = dn.from_chords(&chords).unwrap();
    let order: Vec<CsPair> = chords.iter().map(|&ch| dn.pair_of(ch)).collect();
    let s0 = Seed::with_assignment(&dn, &t, &order, xyz()).unwrap();
    let all = all_cluster_variables(&dn, &s0).unwrap();
    let printed = [
        (c(0, Side::L), rat("z + 1", "x")),
        (c(1, Side::L), rat("z + 1", "y")),
        (c(2, Side::R), rat("x + y", "z")),
        (s(0, 2), rat("x + y + y*z", "x*z")),
        (dn.canonical(s(1, 5)).unwrap(), rat("x + y + x*z", "y*z")),
        (c(2, Side::L), rat("x*z + y*z + x + y", "x*y*z")),
    ];
    for (ch, want) in &printed {
        let got = &all[&dn.pair_of(*ch)];
        check(got == want, || format!("{} is {}", ch, got.to_fraction_string(&xyz())))?;
    }
    Ok("six printed variables equal term by term".into())
}

fn worked_relation() -> Outcome {
    let dn = Dn::new(3).unwrap();
    let t = dn.central_at(0);
    let order = [dn.pair_of(c(0, Side::L)), dn.pair_of(c(0, Side::R)), dn.pair_of(s(0, 2))];
    let s0 = Seed::with_assignment(&dn, &t, &order, xyz()).unwrap();
    let removed = dn.pair_of(c(3, Side::L));
    let remaining = dn.pair_of(c(0, Side::R));
    let (s1, added) = s0.mutate(&dn, &removed).unwrap();
    check(added == dn.pair_of(c(2, Side::R)), || format!("flip added {}", added))?;
    let x = |p: &CsPair| if *p == added { s1.var(p).clone() } else { s0.var(p).clone() };
    let straight = x(&dn.pair_of(s(0, 2)));
    // [2,3] is a boundary edge, so its weight is one
    check(dn.straight(2, 3).is_err(), || "[2,3] should be a boundary edge".into())?;
    let boundary = LaurentPoly::one(3);

    let full_lhs = &(&x(&removed) * &x(&remaining)) * &x(&added);
    let full_rhs = &(&straight * &x(&remaining)) + &(&boundary * &x(&remaining));
    check(full_lhs == full_rhs, || "unsimplified relation fails".into())?;
    let simplified = &(&x(&removed) * &x(&added)) - &(&straight + &boundary);
    check(simplified.is_zero(), || format!("x(0L)*x(2R) - x([0,2]) - 1 = {}", simplified.to_string_with(&xyz())))?;

    let rel = exchange_relation(&dn, &t, &removed).unwrap();
    check(rel.shape == FlipShape::DoubleCentral, || format!("template shape {:?}", rel.shape))?;
    let mut vars: BTreeMap<CsPair, LaurentPoly> = s0.vars.clone();
    vars.insert(added, x(&added));
    let w = pair_weights(&dn, &vars, 3);
    check(rel.lhs(3, &w) == rel.rhs(3, &w), || "geometric template fails".into())?;

    let other = &(&x(&remaining) * &x(&added)) - &(&straight + &boundary);
    println!(
        "  note: with the remaining central pair 0R in place of the removed 0L the difference is {}, \
         so the check uses the removed pair as printed in the worked relation",
        other.to_fraction_string(&xyz())
    );
    Ok("x(0L)*x(2R) = x([0,2]) + 1 after flipping 0L into 2R; unsimplified form and template agree".into())
}

fn laurent_and_positivity() -> Outcome {
    let mut checked = 0usize;
    for n in 3..=4 {
        let dn = Dn::new(n).unwrap();
        for t in &dn.enumerate(4).nodes {
            let s0 = Seed::initial(&dn, t);
            let all = all_cluster_variables(&dn, &s0).map_err(|e| format!("from {}: {}", t, e))?;
            check(all.len() == n * n, || format!("{} variables from {}", all.len(), t))?;
            for (p, x) in &all {
                check(x.has_positive_coefficients(), || format!("{} from {} has a negative coefficient", p, t))?;
                checked += 1;
            }
        }
    }
    let dn = Dn::new(5).unwrap();
    let nodes = dn.enumerate(4).nodes;
    let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
    let walks = 10_000;
    let steps = 6;
    for _ in 0..walks {
        let mut sd = Seed::initial(&dn, &nodes[rng.random_range(0..nodes.len())]);
        for _ in 0..steps {
            let chi = sd.t.pairs[rng.random_range(0..5)];
            let (next, new) = sd.mutate(&dn, &chi).map_err(|e| format!("walk step failed: {}", e))?;
            check(next.var(&new).has_positive_coefficients(), || format!("negative coefficient at {}", new))?;
            sd = next;
        }
    }
    Ok(format!("{} variables exhaustive at n = 3,4; {} walks of {} steps at n = 5", checked, walks, steps))
}

fn d_vectors() -> Outcome {
    let mut checked = 0usize;
    for n in 3..=4 {
        let dn = Dn::new(n).unwrap();
        for t in &dn.enumerate(4).nodes {
            let s0 = Seed::initial(&dn, t);
            let mut seed_pairs = vec![None; n];
            for (p, x) in &s0.vars {
                seed_pairs[variable_index(x)] = Some(*p);
            }
            let all = all_cluster_variables(&dn, &s0).unwrap();
            for (delta, x) in &all {
                if t.contains(delta) {
                    continue;
                }
                // crossings counted with floating point coordinates
                let oracle: Vec<u32> = seed_pairs
                    .iter()
                    .map(|th| th.unwrap().chords().iter().filter(|&&ch| common::geo::crosses(n, ch, delta.rep)).count() as u32)
                    .collect();
                let denominator = x.denominator_vector().map_err(|e| e.to_string())?;
                check(denominator == oracle, || format!("{} from {}: {:?} vs {:?}", delta, t, denominator, oracle))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{} denominators equal crossing numbers", checked))
}

fn commutation() -> Outcome {
    let mut flips = 0usize;
    for n in 3..=4 {
        let dn = Dn::new(n).unwrap();
        for t in &dn.enumerate(4).nodes {
            let q = quiver(&dn, t);
            for chi in &t.pairs {
                let (t2, new) = dn.flip(t, chi).unwrap();
                let mutated = q.mutate(chi).map_err(|e| e.to_string())?.relabel(chi, &new);
                check(mutated == quiver(&dn, &t2), || format!("flip of {} in {}", chi, t))?;
                flips += 1;
            }
        }
    }
    let mut orientations = 0usize;
    for n in 3..=6 {
        let dn = Dn::new(n).unwrap();
        // Dynkin diagram of D_n: 0-2, 1-2 and a path 2-3-...-(n-1)
        let mut edges = vec![(0, 2), (1, 2)];
        edges.extend((2..n - 1).map(|i| (i, i + 1)));
        for cw in coxeter_elements(n) {
            let sc = SubwordComplex::new(&dn, &cw).unwrap();
            let z = accordion(&dn, &cw).unwrap();
            let acc = sc.accordion();
            let label = |p: &CsPair| cw[acc.iter().position(|x| x == p).unwrap()];
            let at = |l: usize| cw.iter().position(|&x| x == l).unwrap();
            let mut want: Vec<(usize, usize)> =
                edges.iter().map(|&(a, b)| if at(a) < at(b) { (a, b) } else { (b, a) }).collect();
            want.sort();
            let q = quiver(&dn, &z);
            let mut got: Vec<(usize, usize)> = q.arcs.iter().map(|((a, b), _)| (label(a), label(b))).collect();
            got.sort();
            check(q.arcs.values().all(|&m| m == 1) && got == want, || format!("c = {:?}: {:?} vs {:?}", cw, got, want))?;
            orientations += 1;
        }
        for side in [Side::L, Side::R] {
            let q = quiver(&dn, &dn.star(side));
            let ok = q.arcs.len() == n && q.nodes.iter().all(|k| q.in_arcs(k).len() == 1 && q.out_arcs(k).len() == 1);
            let mut cur = q.nodes[0];
            let mut len = 0;
            loop {
                cur = q.out_arcs(&cur)[0].0;
                len += 1;
                if cur == q.nodes[0] || len > n {
                    break;
                }
            }
            check(ok && len == n, || format!("star {:?} at n = {} is not an {}-cycle", side, n, n))?;
        }
    }
    Ok(format!("{} flips commute; {} Coxeter elements give the oriented Dynkin diagram; stars are n-cycles", flips, orientations))
}

fn seed_xyz(dn: &Dn, chords: [Chord; 3]) -> Seed {
    let t = dn.from_chords(&chords).unwrap();
    let order: Vec<CsPair> = chords.iter().map(|&ch| dn.pair_of(ch)).collect();
    Seed::with_assignment(dn, &t, &order, xyz()).unwrap()
}

/// (w, m, x) for the chords [3,5], 2R, 5L in one opening.
fn printed_triple(dn: &Dn, sd: &Seed, pick: impl Fn(&Opening) -> bool, rows: [(Chord, LaurentPoly, LaurentPoly, LaurentPoly); 3]) -> Result<usize, String> {
    let ops = openings(dn, sd).unwrap();
    let o = ops.iter().find(|o| pick(o)).ok_or("no such opening")?;
    let truth = all_cluster_variables(dn, sd).unwrap();
    let mut count = 0;
    for (ch, w, m, x) in rows {
        let (a, b) = o.deletion_vertices(ch).ok_or(format!("{} not in opening", ch))?;
        check(o.w_value(a, b) == w, || format!("w of {}", ch))?;
        check(o.m_value(ch).map_err(|e| e.to_string())? == m, || format!("m of {}", ch))?;
        let via = variable_via_matching_in(dn, &ops, &dn.pair_of(ch)).map_err(|e| e.to_string())?;
        check(via.x == x && truth[&dn.pair_of(ch)] == x, || format!("x of {}", ch))?;
        count += 3;
    }
    Ok(count)
}

fn matchings() -> Outcome {
    let mut pairs_checked = [0usize; 2];
    for (slot, n) in [(0usize, 3usize), (1, 4)] {
        let dn = Dn::new(n).unwrap();
        for t in &dn.enumerate(4).nodes {
            let s0 = Seed::initial(&dn, t);
            let truth = all_cluster_variables(&dn, &s0).unwrap();
            let ops = openings(&dn, &s0).map_err(|e| e.to_string())?;
            for (p, x) in &truth {
                let r = variable_via_matching_in(&dn, &ops, p).map_err(|e| format!("{} from {}: {}", p, t, e))?;
                check(&r.x == x, || format!("{} from {}", p, t))?;
                pairs_checked[slot] += 1;
            }
        }
    }
    check(pairs_checked[1] >= 500, || format!("only {} pairs at n = 4", pairs_checked[1]))?;

    let dn = Dn::new(3).unwrap();
    let right = seed_xyz(&dn, [c(1, Side::R), c(0, Side::R), s(1, 3)]);
    let mut printed = printed_triple(&dn, &right, |o| o.side == Side::R && o.lo == 1 && o.hi == 6, [
        (s(3, 5), &poly("y*z") * &poly("x + y + y*z"), rat("x + y + y*z", "x*z"), rat("x + y + y*z", "x*z")),
        (c(2, Side::R), &poly("x*y*z") * &poly("x + y"), rat("x + y", "z"), rat("x + y", "z")),
        (
            c(5, Side::L),
            &poly("x + y") * &poly("x + y + x*z + y*z"),
            &rat("x + y", "z") * &rat("x + y + x*z + y*z", "x*y*z"),
            rat("x + y + x*z + y*z", "x*y*z"),
        ),
    ])?;
    let central = seed_xyz(&dn, [c(1, Side::R), c(1, Side::L), s(1, 3)]);
    let t3 = poly("x*y + z + 1");
    printed += printed_triple(&dn, &central, |o| o.side == Side::R && o.lo == 1, [
        (s(3, 5), &poly("x^2*y*z") * &poly("x*y + z^2 + 2*z + 1"), rat("x*y + z^2 + 2*z + 1", "x*y*z"), rat("x*y + z^2 + 2*z + 1", "x*y*z")),
        (c(2, Side::R), &poly("x^3*y*z") * &t3, rat("x*y + z + 1", "y*z"), rat("x*y + z + 1", "y*z")),
        (c(5, Side::L), &poly("x^2*y") * &t3.pow(2), t3.pow(2).div_exact(&poly("x*y*z^2")).unwrap(), rat("x*y + z + 1", "x*z")),
    ])?;

    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let mut quads = 0;
    for n in 3..=4 {
        let dn = Dn::new(n).unwrap();
        let nodes = dn.enumerate(4).nodes;
        while quads < 500 * (n - 2) {
            let t = &nodes[rng.random_range(0..nodes.len())];
            let ops = openings(&dn, &Seed::initial(&dn, t)).unwrap();
            let o = &ops[rng.random_range(0..ops.len())];
            let v = o.vertices.len();
            let mut q: Vec<usize> = (0..v).collect();
            for i in 0..4 {
                let j = rng.random_range(i..v);
                q.swap(i, j);
            }
            let mut q = q[..4].to_vec();
            q.sort();
            let (a, b, cc, d) = (q[0], q[1], q[2], q[3]);
            let lhs = &o.w_value(a, cc) * &o.w_value(b, d);
            let rhs = &(&o.w_value(a, b) * &o.w_value(cc, d)) + &(&o.w_value(a, d) * &o.w_value(b, cc));
            check(lhs == rhs, || format!("Kuo fails on {:?} in an opening of {}", q, t))?;
            quads += 1;
        }
    }
    Ok(format!(
        "{} pairs at n = 3 and {} at n = 4 agree; {} printed values reproduce; {} Kuo quadruples",
        pairs_checked[0], pairs_checked[1], printed, quads
    ))
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(m, k, 0, &mut vec![], &mut out);
    out
}

fn subword_correspondence() -> Outcome {
    let dn = Dn::new(3).unwrap();
    let sc = SubwordComplex::new(&dn, &[1, 2, 0]).unwrap();
    check(sc.word == vec![1, 2, 0, 1, 2, 0, 1, 2, 1], || format!("word {:?}", sc.word))?;
    let table = [
        c(2, Side::L),
        s(0, 2),
        c(0, Side::L),
        c(0, Side::R),
        dn.canonical(s(0, 4)).unwrap(),
        c(1, Side::R),
        c(1, Side::L),
        dn.canonical(s(1, 5)).unwrap(),
        c(2, Side::R),
    ];
    for (i, ch) in table.iter().enumerate() {
        let got = sc.pair_at(i + 1).unwrap();
        check(got == dn.pair_of(*ch), || format!("position {} gives {}", i + 1, got))?;
    }

    let mut counts = vec![];
    for (n, subsets, catalan) in [(3usize, 84usize, 14usize), (4, 1820, 50)] {
        let dn = Dn::new(n).unwrap();
        let elements = coxeter_elements(n);
        for cw in &elements {
            let sc = SubwordComplex::new(&dn, cw).unwrap();
            let (mut agree, mut total, mut facets) = (0, 0, 0);
            for set in combinations(n * n, n) {
                let positions: BTreeSet<usize> = set.iter().map(|i| i + 1).collect();
                let pairs: Vec<CsPair> = positions.iter().map(|&i| sc.pair_at(i).unwrap()).collect();
                // geometry side checked with the floating point crossing oracle
                let noncrossing = pairs.iter().enumerate().all(|(i, a)| {
                    pairs[i + 1..].iter().all(|b| {
                        a != b && a.chords().iter().all(|&x| b.chords().iter().all(|&y| !common::geo::crosses(n, x, y)))
                    })
                });
                let word_side = sc.is_facet(&positions);
                agree += (word_side == noncrossing) as usize;
                facets += word_side as usize;
                total += 1;
            }
            check((agree, total, facets) == (subsets, subsets, catalan), || {
                format!("c = {:?}: {} of {} agree, {} facets", cw, agree, total, facets)
            })?;
        }
        counts.push(format!("{} subsets x {} elements at n = {}", subsets, elements.len(), n));
    }
    Ok(format!("nine-row table verbatim; {}; facets 14/50", counts.join(", ")))
}

/// Positive roots of D_n over the simple roots `e1 + e2` and `e_{k+1} - e_k`.
fn oracle_positive_roots(n: usize) -> BTreeSet<Vec<i64>> {
    let to_simple = |v: &[i64]| -> Vec<i64> {
        let mut a = vec![0i64; n + 1];
        for k in (3..=n).rev() {
            a[k - 1] = v[k - 1] + a[k];
        }
        let mut out = vec![(v[0] + v[1] + a[2]) / 2, (v[1] - v[0] + a[2]) / 2];
        out.extend_from_slice(&a[2..n]);
        out
    };
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for sign in [-1, 1] {
                let mut v = vec![0i64; n];
                v[j] = 1;
                v[i] = sign;
                out.insert(to_simple(&v));
            }
        }
    }
    out
}

fn root_clusters() -> Outcome {
    let mut elements = 0;
    for n in 3..=6 {
        let dn = Dn::new(n).unwrap();
        let mut almost_positive = oracle_positive_roots(n);
        for i in 0..n {
            let mut v = vec![0i64; n];
            v[i] = -1;
            almost_positive.insert(v);
        }
        check(almost_positive.len() == n * n, || format!("oracle has {} roots", almost_positive.len()))?;
        for cw in coxeter_elements(n) {
            let sc = SubwordComplex::new(&dn, &cw).unwrap();
            let image: BTreeSet<Vec<i64>> = dn.all_cs_pairs().iter().map(|p| sc.root_of(&dn, p)).collect();
            check(image == almost_positive, || format!("c = {:?} is not a bijection", cw))?;
            elements += 1;
        }
    }
    let dn = Dn::new(3).unwrap();
    let sc = SubwordComplex::new(&dn, &[1, 2, 0]).unwrap();
    let facet: BTreeSet<usize> = [1, 7, 8].into();
    let t = sc.facet_to_pseudotriangulation(&dn, &facet).unwrap();
    check(t == dn.from_chords(&[c(2, Side::L), c(1, Side::L), s(1, 5)]).unwrap(), || format!("facet gives {}", t))?;
    let roots: BTreeSet<Vec<i64>> = t.pairs.iter().map(|p| sc.root_of(&dn, p)).collect();
    let printed: BTreeSet<Vec<i64>> = [vec![0, -1, 0], vec![0, 0, 1], vec![1, 0, 1]].into();
    check(roots == printed, || format!("roots {:?}", roots))?;
    Ok(format!("bijection for {} Coxeter elements at n = 3..6; printed cluster reproduces", elements))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("enumeration counts", enumeration_counts),
        ("printed cluster variables", printed_variables),
        ("worked central relation", worked_relation),
        ("Laurent phenomenon and positivity", laurent_and_positivity),
        ("d-vectors are crossing numbers", d_vectors),
        ("flips commute with mutation", commutation),
        ("matching formula", matchings),
        ("subword correspondence", subword_correspondence),
        ("root clusters", root_clusters),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {}", msg))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {} ({}) [{:.1}s]", i + 1, name, detail, secs),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {} ({}) [{:.1}s]", i + 1, name, detail, secs);
            }
        }
    }
    if failed > 0 {
        println!("{} criteria failed", failed);
        std::process::exit(1);
    }
}
