//! Acceptance gate: one test per criterion, each printing a single
//! PASS line (run with `--nocapture` to see them). Every oracle here is
//! an independent naive recomputation, not a call back into the code
//! under test.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::OnceLock;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use statrs::distribution::{ContinuousCDF, StudentsT};

use citenet::centrality::{betweenness_all, closeness_all, constraint_all};
use citenet::config::RunConfig;
use citenet::corpus::Corpus;
use citenet::features::{label_top_quantile, AggregationConfig, FeatureRow, FeatureTable};
use citenet::gbt::{fit, Hyperparameters, TreeEnsemble};
use citenet::graph::{build_publication_network, WeightedGraph};
use citenet::pipeline::{run, Stage, FILE_EVALUATION, STANDARD_STAGES};
use citenet::stats::{accuracy, cohen_kappa, roc_auc, spearman, welch_t_test};
use citenet::stemmer::stem;
use citenet::synth::{generate, SynthConfig};
use citenet::text::{default_lexicon, sentiment};

fn pass(name: &str) {
    println!("ACCEPTANCE {name}: PASS");
}

// ------------------------------------------------------------ graph suite

struct TestGraph {
    n: usize,
    /// adjacency as (neighbor, weight) lists, mirrored
    adj: Vec<Vec<(usize, f64)>>,
    graph: WeightedGraph,
}

fn random_graphs() -> Vec<TestGraph> {
    let mut out = Vec::new();
    for seed in 0..50u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = 3 + (seed as usize % 10); // 3..=12
        let mut adj = vec![Vec::new(); n];
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(0.3) {
                    let w = rng.gen_range(0.5..2.0);
                    adj[u].push((v, w));
                    adj[v].push((u, w));
                    edges.push((u, v, w));
                }
            }
        }
        let ids = (0..n).map(|i| format!("n{i:02}")).collect();
        out.push(TestGraph { n, adj, graph: WeightedGraph::from_edges(ids, &edges) });
    }
    out
}

fn bfs_dist(adj: &[Vec<(usize, f64)>], s: usize) -> Vec<i64> {
    let mut dist = vec![-1i64; adj.len()];
    let mut queue = std::collections::VecDeque::new();
    dist[s] = 0;
    queue.push_back(s);
    while let Some(v) = queue.pop_front() {
        for &(w, _) in &adj[v] {
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Every shortest path from s to t, as explicit node sequences.
fn enumerate_shortest_paths(
    adj: &[Vec<(usize, f64)>],
    dist: &[i64],
    s: usize,
    t: usize,
) -> Vec<Vec<usize>> {
    if dist[t] < 0 {
        return Vec::new();
    }
    fn extend(
        adj: &[Vec<(usize, f64)>],
        dist: &[i64],
        s: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = *path.last().unwrap();
        if v == s {
            let mut p = path.clone();
            p.reverse();
            out.push(p);
            return;
        }
        for &(u, _) in &adj[v] {
            if dist[u] == dist[v] - 1 {
                path.push(u);
                extend(adj, dist, s, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(adj, dist, s, &mut vec![t], &mut out);
    out
}

fn betweenness_oracle(g: &TestGraph) -> Vec<f64> {
    let n = g.n;
    if n < 3 {
        return vec![0.0; n];
    }
    let mut b = vec![0.0; n];
    for s in 0..n {
        let dist = bfs_dist(&g.adj, s);
        for t in s + 1..n {
            let paths = enumerate_shortest_paths(&g.adj, &dist, s, t);
            if paths.is_empty() {
                continue;
            }
            for (v, bv) in b.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count();
                *bv += through as f64 / paths.len() as f64;
            }
        }
    }
    let max = (n - 1) as f64 * (n - 2) as f64 / 2.0;
    b.iter().map(|x| x / max).collect()
}

fn closeness_oracle(g: &TestGraph) -> Vec<f64> {
    let n = g.n;
    (0..n)
        .map(|i| {
            let dist = bfs_dist(&g.adj, i);
            let reachable: Vec<i64> =
                dist.iter().enumerate().filter(|&(j, &d)| j != i && d > 0).map(|(_, &d)| d).collect();
            if reachable.is_empty() {
                return 0.0;
            }
            let n_c = reachable.len() + 1;
            let sum: f64 = reachable.iter().map(|&d| d as f64).sum();
            ((n_c - 1) as f64).powi(2) / ((n - 1) as f64 * sum)
        })
        .collect()
}

fn constraint_oracle(g: &TestGraph) -> Vec<f64> {
    let n = g.n;
    let weight = |a: usize, b: usize| -> f64 {
        g.adj[a].iter().find(|&&(v, _)| v == b).map(|&(_, w)| w).unwrap_or(0.0)
    };
    let p = |a: usize, b: usize| -> f64 {
        let total: f64 = g.adj[a].iter().map(|&(_, w)| w).sum();
        if total == 0.0 {
            0.0
        } else {
            weight(a, b) / total
        }
    };
    (0..n)
        .map(|i| {
            if g.adj[i].is_empty() {
                return 1.0;
            }
            let mut c = 0.0;
            for &(j, _) in &g.adj[i] {
                let mut term = p(i, j);
                for &(q, _) in &g.adj[i] {
                    if q != j {
                        term += p(i, q) * p(q, j);
                    }
                }
                c += term * term;
            }
            c
        })
        .collect()
}

#[test]
fn betweenness_matches_path_enumeration_oracle() {
    let start = Instant::now();
    for (k, g) in random_graphs().iter().enumerate() {
        let got = betweenness_all(&g.graph);
        let want = betweenness_oracle(g);
        for v in 0..g.n {
            assert!(
                (got[v] - want[v]).abs() <= 1e-9,
                "graph {k} node {v}: {} vs oracle {}",
                got[v],
                want[v]
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "betweenness suite took {elapsed:?}");
    pass("betweenness oracle (50 graphs, <5s)");
}

#[test]
fn closeness_and_constraint_match_direct_formula_oracles() {
    for (k, g) in random_graphs().iter().enumerate() {
        let clo = closeness_all(&g.graph);
        let clo_want = closeness_oracle(g);
        let con = constraint_all(&g.graph);
        let con_want = constraint_oracle(g);
        for v in 0..g.n {
            assert!((clo[v] - clo_want[v]).abs() <= 1e-9, "graph {k} closeness node {v}");
            assert!((con[v] - con_want[v]).abs() <= 1e-9, "graph {k} constraint node {v}");
        }
    }
    // unit triangle: each node invests 1/2 in two mutually tied contacts
    let triangle = WeightedGraph::from_edges(
        vec!["a".into(), "b".into(), "c".into()],
        &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)],
    );
    for c in constraint_all(&triangle) {
        assert_eq!(c, 1.125);
    }
    let dyad = WeightedGraph::from_edges(vec!["a".into(), "b".into()], &[(0, 1, 1.0)]);
    for c in constraint_all(&dyad) {
        assert_eq!(c, 1.0);
    }
    pass("closeness and constraint oracles; triangle 1.125, dyad 1.0 exact");
}

#[test]
fn three_shared_authors_give_publication_edge_weight_three() {
    let jsonl = concat!(
        r#"{"pub_id":"p1","year":2015,"authors":["a1","a2","a3","a4"],"abstract":"x","sjr":1.0,"citations":0}"#,
        "\n",
        r#"{"pub_id":"p2","year":2015,"authors":["a1","a2","a3","a5"],"abstract":"x","sjr":1.0,"citations":0}"#,
        "\n",
    );
    let corpus = citenet::corpus::parse_corpus(jsonl.as_bytes()).unwrap();
    let years = [2015].into_iter().collect();
    let net = build_publication_network(&corpus, &years).unwrap();
    let (i, j) = (net.node_index("p1").unwrap(), net.node_index("p2").unwrap());
    assert_eq!(net.edge_weight(i, j), Some(3.0));
    pass("publication network: three shared authors => edge weight 3");
}

// ------------------------------------------------------------------ shap

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn brute_force_shap(model: &TreeEnsemble, row: &[f64], background: &[Vec<f64>]) -> Vec<f64> {
    let m = model.feature_names.len();
    let value = |mask: u32| -> f64 {
        background
            .iter()
            .map(|b| {
                let hybrid: Vec<f64> = (0..m)
                    .map(|j| if mask & (1 << j) != 0 { row[j] } else { b[j] })
                    .collect();
                model.margin(&hybrid).unwrap()
            })
            .sum::<f64>()
            / background.len() as f64
    };
    let mut phi = vec![0.0; m];
    for mask in 0..(1u32 << m) {
        let s = mask.count_ones() as usize;
        for (j, phi_j) in phi.iter_mut().enumerate() {
            if mask & (1 << j) == 0 {
                let w = factorial(s) * factorial(m - s - 1) / factorial(m);
                *phi_j += w * (value(mask | (1 << j)) - value(mask));
            }
        }
    }
    phi
}

#[test]
fn shap_matches_brute_force_oracle_and_local_accuracy() {
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 20 {
        seed += 1;
        let mut rng = StdRng::seed_from_u64(seed);
        let m = rng.gen_range(2..=8);
        let n = 50;
        let rows: Vec<Vec<f64>> =
            (0..n).map(|_| (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        let labels: Vec<bool> =
            rows.iter().map(|r| r.iter().sum::<f64>() + rng.gen_range(-1.0..1.0) > 0.0).collect();
        if labels.iter().all(|&y| y) || labels.iter().all(|&y| !y) {
            continue;
        }
        let hp = Hyperparameters {
            rounds: rng.gen_range(1..=10),
            max_depth: rng.gen_range(1..=3),
            ..Default::default()
        };
        let names: Vec<String> = (0..m).map(|i| format!("f{i}")).collect();
        let model = fit(&rows, &labels, &names, &hp).unwrap();
        let background: Vec<Vec<f64>> = rows[..4].to_vec();
        for row in &rows[n - 5..] {
            let att = model.shap_values(row, &background).unwrap();
            let oracle = brute_force_shap(&model, row, &background);
            for (j, &want) in oracle.iter().enumerate() {
                assert!(
                    (att.contributions[j] - want).abs() <= 1e-6,
                    "seed {seed} feature {j}: {} vs {}",
                    att.contributions[j],
                    want
                );
            }
            let margin = model.margin(row).unwrap();
            let reconstructed = att.base + att.contributions.iter().sum::<f64>();
            assert!((reconstructed - margin).abs() <= 1e-9, "local accuracy seed {seed}");
        }
        checked += 1;
    }
    pass("SHAP: 20 ensembles match 2^M oracle (1e-6); local accuracy 1e-9");
}

// ----------------------------------------------------------------- stats

fn naive_average_ranks(values: &[f64]) -> Vec<f64> {
    values
        .iter()
        .map(|&v| {
            let less = values.iter().filter(|&&u| u < v).count() as f64;
            let equal = values.iter().filter(|&&u| u == v).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

fn naive_spearman(x: &[f64], y: &[f64]) -> (f64, f64) {
    let rx = naive_average_ranks(x);
    let ry = naive_average_ranks(y);
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my) * (b - my)).sum();
    let rho = cov / (vx * vy).sqrt();
    if (1.0 - rho * rho) < 1e-15 {
        return (rho, 0.0);
    }
    let t = rho * ((n - 2.0) / (1.0 - rho * rho)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, n - 2.0).unwrap();
    (rho, 2.0 * (1.0 - dist.cdf(t.abs())))
}

fn naive_kappa(pred: &[bool], truth: &[bool]) -> f64 {
    let n = truth.len() as f64;
    let po = pred.iter().zip(truth).filter(|(a, b)| a == b).count() as f64 / n;
    let pred_pos = pred.iter().filter(|&&v| v).count() as f64 / n;
    let truth_pos = truth.iter().filter(|&&v| v).count() as f64 / n;
    let pe = pred_pos * truth_pos + (1.0 - pred_pos) * (1.0 - truth_pos);
    (po - pe) / (1.0 - pe)
}

fn naive_auc(scores: &[f64], truth: &[bool]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &ti) in truth.iter().enumerate() {
        if !ti {
            continue;
        }
        for (j, &tj) in truth.iter().enumerate() {
            if tj {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

fn naive_welch(a: &[f64], b: &[f64]) -> (f64, f64) {
    let var = |v: &[f64]| -> f64 {
        let m = v.iter().sum::<f64>() / v.len() as f64;
        v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() as f64 - 1.0)
    };
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (a.iter().sum::<f64>() / na, b.iter().sum::<f64>() / nb);
    let (va, vb) = (var(a), var(b));
    let se2 = va / na + vb / nb;
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (va * va / (na * na * (na - 1.0)) + vb * vb / (nb * nb * (nb - 1.0)));
    let dist = StudentsT::new(0.0, 1.0, df).unwrap();
    (t, 2.0 * (1.0 - dist.cdf(t.abs())))
}

#[test]
fn stats_match_naive_recomputations_on_random_vectors() {
    for seed in 0..100u64 {
        let mut rng = StdRng::seed_from_u64(1000 + seed);
        let n = rng.gen_range(10..=120);
        let quantize = rng.gen_bool(0.5);
        let draw = |rng: &mut StdRng| -> f64 {
            let v: f64 = rng.gen_range(-3.0..3.0);
            if quantize {
                (v * 10.0).round() / 10.0
            } else {
                v
            }
        };
        let x: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        let y: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();

        let (rho, p) = spearman(&x, &y).unwrap();
        let (rho_o, p_o) = naive_spearman(&x, &y);
        assert!((rho - rho_o).abs() <= 1e-10, "seed {seed} rho");
        assert!((p - p_o).abs() <= 1e-10, "seed {seed} p");

        let mut truth: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
        let mut pred: Vec<bool> = truth
            .iter()
            .map(|&t| if rng.gen_bool(0.3) { !t } else { t })
            .collect();
        // guarantee both classes and both prediction values
        truth[0] = true;
        truth[1] = false;
        pred[0] = false;
        pred[1] = true;
        let acc = accuracy(&pred, &truth).unwrap();
        let acc_o =
            pred.iter().zip(&truth).filter(|(a, b)| a == b).count() as f64 / n as f64;
        assert_eq!(acc, acc_o, "seed {seed} accuracy");
        let kappa = cohen_kappa(&pred, &truth).unwrap();
        assert!((kappa - naive_kappa(&pred, &truth)).abs() <= 1e-12, "seed {seed} kappa");

        let scores: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        let auc = roc_auc(&scores, &truth).unwrap();
        assert!((auc - naive_auc(&scores, &truth)).abs() <= 1e-12, "seed {seed} auc");

        let split = n / 2;
        let (t, pw) = welch_t_test(&x[..split], &x[split..]).unwrap();
        let (t_o, pw_o) = naive_welch(&x[..split], &x[split..]);
        assert!((t - t_o).abs() <= 1e-10, "seed {seed} welch t");
        assert!((pw - pw_o).abs() <= 1e-10, "seed {seed} welch p");
    }
    pass("Spearman/kappa/AUC/Welch match naive oracles on 100 vectors");
}

// ---------------------------------------------------- planted-signal runs

fn planted_synth_config() -> SynthConfig {
    let mut betas = BTreeMap::new();
    betas.insert("sjr".to_string(), 1.5);
    betas.insert("rotating".to_string(), 0.8);
    SynthConfig {
        n_pubs: 10_000,
        n_authors: 3_000,
        n_journals: 50,
        year_start: 2015,
        year_end: 2017,
        vocab_size: 2_000,
        mean_byline: 3.0,
        abstract_min_words: 50,
        abstract_max_words: 150,
        sjr_sigma: 0.8,
        epsilon: 0.1,
        intercept: 2.0,
        noise_sd: 0.3,
        citation_cap: 100_000,
        betas,
        seed: 7,
    }
}

fn planted_corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| generate(&planted_synth_config()).unwrap())
}

#[test]
fn planted_signal_end_to_end_recovers_the_feature_ordering() {
    let start = Instant::now();
    let dir = tempfile::TempDir::new().unwrap();
    let corpus_path = dir.path().join("raw.jsonl");
    let mut buf = Vec::new();
    planted_corpus().serialize_jsonl(&mut buf).unwrap();
    fs::write(&corpus_path, &buf).unwrap();

    let config = RunConfig {
        corpus: corpus_path.display().to_string(),
        out_dir: dir.path().join("out").display().to_string(),
        seed: 7,
        cv_reps: 30,
        ..RunConfig::default()
    };
    for stage in STANDARD_STAGES {
        run(stage, &config).unwrap();
    }

    let text = fs::read_to_string(Path::new(&config.out_dir).join(FILE_EVALUATION)).unwrap();
    let output: citenet::pipeline::TrainOutput = serde_json::from_str(&text).unwrap();
    let eval = output.evaluation;
    assert_eq!(eval.reps.len(), 30);
    assert!(eval.accuracy.mean >= 0.75, "accuracy {}", eval.accuracy.mean);
    assert_eq!(eval.importances[0].feature, "sjr", "top importance {:?}", eval.importances[0]);
    let rotating_rank = eval
        .importances
        .iter()
        .position(|i| i.feature == "x9")
        .expect("rotating feature present");
    assert!(rotating_rank < 3, "rotating feature ranked {rotating_rank}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 180.0, "end-to-end took {elapsed:?}");
    pass("planted signal: accuracy >= 0.75, SJR first, rotating in top 3, <3 min");
}

#[test]
fn label_share_is_near_the_configured_quantile() {
    let corpus = planted_corpus();
    let rows: Vec<FeatureRow> = corpus
        .records
        .iter()
        .map(|r| FeatureRow {
            pub_id: r.pub_id.clone(),
            label: false,
            citations: r.citations,
            x: [0.0; 16],
        })
        .collect();
    assert_eq!(rows.len(), 10_000);
    let mut table = FeatureTable {
        rows,
        aggregation: AggregationConfig::default(),
        label_threshold: None,
        label_q: None,
    };
    let summary = label_top_quantile(&mut table, 0.25).unwrap();
    let share = summary.positives as f64 / table.rows.len() as f64;
    assert!((0.23..=0.27).contains(&share), "share {share}");
    pass("label share at q=0.25 on 10,000 rows within [0.23, 0.27]");
}

#[test]
fn identical_config_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::TempDir::new().unwrap();
    let config = RunConfig {
        corpus: dir.path().join("raw.jsonl").display().to_string(),
        out_dir: dir.path().join("out").display().to_string(),
        synth_pubs: 800,
        synth_authors: 300,
        synth_journals: 25,
        synth_year_start: 2015,
        synth_year_end: 2017,
        synth_vocab: 500,
        synth_abstract_min: 30,
        synth_abstract_max: 80,
        synth_beta_sjr: 0.8,
        synth_noise_sd: 1.2,
        cv_reps: 4,
        rounds: 20,
        shap_background: 30,
        shap_sample: 40,
        ..RunConfig::default()
    };

    let run_all = |threads: usize| -> Vec<(String, Vec<u8>)> {
        let mut c = config.clone();
        c.threads = threads;
        run(Stage::Synth, &c).unwrap();
        for stage in STANDARD_STAGES {
            run(stage, &c).unwrap();
        }
        let mut paths: Vec<_> = fs::read_dir(&c.out_dir).unwrap().map(|e| e.unwrap().path()).collect();
        paths.sort();
        paths
            .into_iter()
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
            .collect()
    };

    let first = run_all(1);
    assert!(!first.is_empty());
    for (name, bytes) in run_all(8) {
        let (_, want) = first.iter().find(|(n, _)| *n == name).expect("same file set");
        assert_eq!(&bytes, want, "{name} differs between 1 and 8 threads");
    }
    for (name, bytes) in run_all(1) {
        let (_, want) = first.iter().find(|(n, _)| *n == name).expect("same file set");
        assert_eq!(&bytes, want, "{name} differs between reruns");
    }
    pass("determinism: byte-identical outputs across reruns and threads 1 vs 8");
}

// ------------------------------------------------------------------ text

#[test]
fn stemmer_vectors_and_sentiment_value() {
    // published reference pairs for the suffix-stripping algorithm
    let vectors: &[(&str, &str)] = &[
        ("caresses", "caress"),
        ("ponies", "poni"),
        ("ties", "ti"),
        ("caress", "caress"),
        ("cats", "cat"),
        ("feed", "feed"),
        ("agreed", "agre"),
        ("plastered", "plaster"),
        ("bled", "bled"),
        ("motoring", "motor"),
        ("sing", "sing"),
        ("conflated", "conflat"),
        ("troubled", "troubl"),
        ("sized", "size"),
        ("hopping", "hop"),
        ("tanned", "tan"),
        ("falling", "fall"),
        ("hissing", "hiss"),
        ("fizzed", "fizz"),
        ("failing", "fail"),
        ("filing", "file"),
        ("happy", "happi"),
        ("sky", "sky"),
        ("relational", "relat"),
        ("conditional", "condit"),
        ("rational", "ration"),
        ("valenci", "valenc"),
        ("hesitanci", "hesit"),
        ("digitizer", "digit"),
        ("conformabli", "conform"),
        ("radicalli", "radic"),
        ("differentli", "differ"),
        ("vileli", "vile"),
        ("analogousli", "analog"),
        ("vietnamization", "vietnam"),
        ("predication", "predic"),
        ("operator", "oper"),
        ("feudalism", "feudal"),
        ("decisiveness", "decis"),
        ("hopefulness", "hope"),
        ("callousness", "callous"),
        ("formaliti", "formal"),
        ("sensitiviti", "sensit"),
        ("sensibiliti", "sensibl"),
        ("triplicate", "triplic"),
        ("formative", "form"),
        ("formalize", "formal"),
        ("electriciti", "electr"),
        ("electrical", "electr"),
        ("hopeful", "hope"),
        ("goodness", "good"),
        ("revival", "reviv"),
        ("allowance", "allow"),
        ("inference", "infer"),
        ("airliner", "airlin"),
        ("gyroscopic", "gyroscop"),
        ("adjustable", "adjust"),
        ("defensible", "defens"),
        ("irritant", "irrit"),
        ("replacement", "replac"),
        ("adjustment", "adjust"),
        ("dependent", "depend"),
        ("adoption", "adopt"),
        ("homologou", "homolog"),
        ("communism", "commun"),
        ("activate", "activ"),
        ("angulariti", "angular"),
        ("homologous", "homolog"),
        ("effective", "effect"),
        ("bowdlerize", "bowdler"),
        ("probate", "probat"),
        ("rate", "rate"),
        ("cease", "ceas"),
        ("controll", "control"),
        ("roll", "roll"),
    ];
    assert!(vectors.len() >= 30);
    for &(input, want) in vectors {
        assert_eq!(stem(input), want, "stem({input})");
    }

    let lexicon = default_lexicon();
    let tokens = vec!["good".to_string()];
    let s = sentiment(&tokens, &lexicon);
    let expected = 1.9 / (1.9f64 * 1.9 + 15.0).sqrt();
    assert!((s - expected).abs() <= 1e-4);
    assert!((s - 0.4404).abs() <= 1e-3);
    pass("stemmer reference vectors exact; sentiment 1.9 => 0.4404 within 1e-4");
}
