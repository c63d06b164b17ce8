//! Evaluation of mined concepts and clusterings: Jaccard distances between
//! extents and reference classes, coverage and support summaries,
//! k-medoids clustering over a distance matrix, and the class-weighted
//! F-measure of a clustering against ground truth.

use rand::prelude::*;
use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Jaccard distance `1 - |a ∩ b| / |a ∪ b|`; undefined when both sides are
/// empty.
pub fn jaccard_distance(a: &BitSet, b: &BitSet) -> Result<f64> {
    let union = a.union_count(b);
    if union == 0 {
        return Err(Error::BothEmpty);
    }
    Ok(1.0 - a.intersection_count(b) as f64 / union as f64)
}

/// How well a family of support sets realizes a reference partition: for
/// each class, the Jaccard distance to its nearest support set, averaged
/// over the classes. Zero exactly when every class appears among the
/// support sets.
pub fn dist_to_partition(supports: &[BitSet], classes: &[BitSet]) -> Result<f64> {
    if supports.is_empty() {
        return Err(Error::Invalid("no support sets to score against".into()));
    }
    if classes.is_empty() {
        return Err(Error::Invalid("no reference classes".into()));
    }
    let mut total = 0.0;
    for c in classes {
        let mut best = f64::INFINITY;
        for s in supports {
            let d = jaccard_distance(c, s)?;
            if d < best {
                best = d;
            }
        }
        total += best;
    }
    Ok(total / classes.len() as f64)
}

/// Number of objects covered by at least one extent.
pub fn covering(extents: &[BitSet], n_objects: usize) -> usize {
    let mut union = BitSet::new(n_objects);
    for e in extents {
        union.union_with(e);
    }
    union.count()
}

pub fn avg_support(extents: &[BitSet]) -> Result<f64> {
    if extents.is_empty() {
        return Err(Error::Invalid("no extents to average".into()));
    }
    Ok(extents.iter().map(|e| e.count()).sum::<usize>() as f64 / extents.len() as f64)
}

/// A partition of `n` objects into dense class ids `0..n_classes`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    labels: Vec<usize>,
    n_classes: usize,
}

impl Partition {
    /// Densify arbitrary ids, keeping first-appearance order.
    pub fn from_labels(raw: &[usize]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Invalid(
                "a partition needs at least one object".into(),
            ));
        }
        let mut seen: Vec<usize> = Vec::new();
        let mut labels = Vec::with_capacity(raw.len());
        for &r in raw {
            let id = match seen.iter().position(|&s| s == r) {
                Some(p) => p,
                None => {
                    seen.push(r);
                    seen.len() - 1
                }
            };
            labels.push(id);
        }
        Ok(Partition {
            labels,
            n_classes: seen.len(),
        })
    }

    /// Partition induced by string labels; also returns the class names in
    /// first-appearance order.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<(Self, Vec<String>)> {
        if names.is_empty() {
            return Err(Error::Invalid(
                "a partition needs at least one object".into(),
            ));
        }
        let mut classes: Vec<String> = Vec::new();
        let mut labels = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            let id = match classes.iter().position(|c| c == n) {
                Some(p) => p,
                None => {
                    classes.push(n.to_string());
                    classes.len() - 1
                }
            };
            labels.push(id);
        }
        let p = Partition {
            labels,
            n_classes: classes.len(),
        };
        Ok((p, classes))
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n_objects(&self) -> usize {
        self.labels.len()
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// One extent per class.
    pub fn classes(&self) -> Vec<BitSet> {
        let mut out = vec![BitSet::new(self.labels.len()); self.n_classes];
        for (obj, &c) in self.labels.iter().enumerate() {
            out[c].insert(obj);
        }
        out
    }

    /// A partition with the same class sizes but objects reassigned by a
    /// seeded shuffle — the chance baseline for distance comparisons.
    pub fn shuffled(&self, seed: u64) -> Partition {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut labels = self.labels.clone();
        labels.shuffle(&mut rng);
        Partition {
            labels,
            n_classes: self.n_classes,
        }
    }
}

/// Dense symmetric distance matrix.
#[derive(Clone, Debug)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn from_fn(n: usize, mut d: impl FnMut(usize, usize) -> Result<f64>) -> Result<Self> {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = d(i, j)?;
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Ok(DistanceMatrix { n, data })
    }
}

/// Pairwise Jaccard distances between itemsets (or extents). Two
/// identical empty sets are at distance zero.
pub fn jaccard_matrix(sets: &[BitSet]) -> Result<DistanceMatrix> {
    DistanceMatrix::from_fn(sets.len(), |i, j| {
        if sets[i].is_empty() && sets[j].is_empty() {
            Ok(0.0)
        } else {
            jaccard_distance(&sets[i], &sets[j])
        }
    })
}

/// Pairwise Euclidean distances between numeric rows.
pub fn euclidean_matrix(rows: &[Vec<f64>]) -> Result<DistanceMatrix> {
    if let Some(bad) = rows.iter().find(|r| r.len() != rows[0].len()) {
        return Err(Error::Invalid(format!(
            "rows of mixed width: {} vs {}",
            bad.len(),
            rows[0].len()
        )));
    }
    DistanceMatrix::from_fn(rows.len(), |i, j| {
        let s: f64 = rows[i]
            .iter()
            .zip(&rows[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok(s.sqrt())
    })
}

/// One k-medoids run from seeded random medoids, improved by swap steps:
/// each round applies the single (medoid, non-medoid) exchange that
/// lowers the total assignment cost the most (first candidate in index
/// order on ties), until no exchange improves or 100 rounds pass.
/// Assignment sends ties to the lowest medoid slot.
fn k_medoids_once(dist: &DistanceMatrix, k: usize, seed: u64) -> (Vec<usize>, f64) {
    let n = dist.n();
    let assign = |medoids: &[usize]| -> (Vec<usize>, f64) {
        let mut labels = vec![0usize; n];
        let mut cost = 0.0;
        for (obj, label) in labels.iter_mut().enumerate() {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (slot, &m) in medoids.iter().enumerate() {
                let d = dist.get(obj, m);
                if d < best_d {
                    best_d = d;
                    best = slot;
                }
            }
            *label = best;
            cost += best_d;
        }
        (labels, cost)
    };
    let cost_of = |medoids: &[usize]| -> f64 {
        (0..n)
            .map(|obj| {
                medoids
                    .iter()
                    .map(|&m| dist.get(obj, m))
                    .fold(f64::INFINITY, f64::min)
            })
            .sum()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut medoids: Vec<usize> = sample(&mut rng, n, k).into_iter().collect();
    medoids.sort_unstable();
    let mut cost = cost_of(&medoids);
    for _ in 0..100 {
        let mut best_swap: Option<(usize, usize, f64)> = None;
        for slot in 0..k {
            let old = medoids[slot];
            for cand in 0..n {
                if medoids.contains(&cand) {
                    continue;
                }
                medoids[slot] = cand;
                let c = cost_of(&medoids);
                if c < cost - 1e-12 && best_swap.is_none_or(|(_, _, best)| c < best) {
                    best_swap = Some((slot, cand, c));
                }
            }
            medoids[slot] = old;
        }
        match best_swap {
            Some((slot, cand, c)) => {
                medoids[slot] = cand;
                cost = c;
            }
            None => break,
        }
    }
    let (labels, cost) = assign(&medoids);
    (labels, cost)
}

fn check_clustering_args(dist: &DistanceMatrix, k: usize, n_trials: usize) -> Result<()> {
    let n = dist.n();
    if n == 0 {
        return Err(Error::Invalid("nothing to cluster".into()));
    }
    if k == 0 || k > n {
        return Err(Error::Invalid(format!("k = {k} with {n} objects")));
    }
    if n_trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    Ok(())
}

/// One partition per trial; trial `t` seeds its generator with
/// `seed + t`, so parallel and serial schedules agree. Clusters that end
/// up empty are dropped, so a partition may have fewer than `k` classes.
pub fn k_medoids_trials(
    dist: &DistanceMatrix,
    k: usize,
    n_trials: usize,
    seed: u64,
) -> Result<Vec<Partition>> {
    check_clustering_args(dist, k, n_trials)?;
    (0..n_trials)
        .map(|t| {
            let (labels, _) = k_medoids_once(dist, k, seed.wrapping_add(t as u64));
            Partition::from_labels(&labels)
        })
        .collect()
}

/// Best-of-`n_trials` k-medoids: the restart with the lowest total
/// distance to medoids wins (earliest trial on ties).
pub fn k_medoids(dist: &DistanceMatrix, k: usize, n_trials: usize, seed: u64) -> Result<Partition> {
    check_clustering_args(dist, k, n_trials)?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for trial in 0..n_trials {
        let (labels, cost) = k_medoids_once(dist, k, seed.wrapping_add(trial as u64));
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, labels));
        }
    }
    Partition::from_labels(&best.expect("at least one trial ran").1)
}

/// Class-size-weighted overall F-measure of a clustering: each ground
/// truth class contributes its best F1 against any cluster, weighted by
/// the class share of the objects.
pub fn overall_f_measure(truth: &Partition, clusters: &Partition) -> Result<f64> {
    if truth.n_objects() != clusters.n_objects() {
        return Err(Error::Invalid(format!(
            "partitions over {} vs {} objects",
            truth.n_objects(),
            clusters.n_objects()
        )));
    }
    let n = truth.n_objects() as f64;
    let truth_classes = truth.classes();
    let cluster_classes = clusters.classes();
    let mut total = 0.0;
    for t in &truth_classes {
        let mut best = 0.0f64;
        for c in &cluster_classes {
            let inter = t.intersection_count(c) as f64;
            if inter == 0.0 {
                continue;
            }
            let f1 = 2.0 * inter / (t.count() + c.count()) as f64;
            if f1 > best {
                best = f1;
            }
        }
        total += t.count() as f64 / n * best;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::sample_normal;

    fn set(n: usize, ids: &[usize]) -> BitSet {
        BitSet::from_indices(n, ids)
    }

    #[test]
    fn jaccard_basics() {
        let a = set(6, &[0, 1, 2]);
        let b = set(6, &[2, 3]);
        assert!((jaccard_distance(&a, &b).unwrap() - 0.75).abs() < 1e-12);
        assert_eq!(jaccard_distance(&a, &a).unwrap(), 0.0);
        let empty = set(6, &[]);
        assert!((jaccard_distance(&a, &empty).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            jaccard_distance(&empty, &empty),
            Err(Error::BothEmpty)
        ));
        // The matrix builder treats two empties as identical instead.
        let m = jaccard_matrix(&[empty.clone(), empty]).unwrap();
        assert_eq!(m.get(0, 1), 0.0);
    }

    #[test]
    fn distance_to_a_three_class_partition() {
        let n = 9;
        let classes = vec![set(n, &[0, 1, 2]), set(n, &[3, 4, 5]), set(n, &[6, 7, 8])];
        // Supports realizing every class score zero, extras notwithstanding.
        let mut supports = classes.clone();
        supports.push(set(n, &[0, 5, 7]));
        assert_eq!(dist_to_partition(&supports, &classes).unwrap(), 0.0);
        // A lone support matching one class leaves the other two at 1.
        let d = dist_to_partition(&[set(n, &[3, 4, 5])], &classes).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-12);
        // The whole-population support sits at 2/3 from every class.
        let all = set(n, &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
        let d = dist_to_partition(std::slice::from_ref(&all), &classes).unwrap();
        assert!((d - 2.0 / 3.0).abs() < 1e-12);
        // A single class covering everything finds itself among supports.
        let d = dist_to_partition(std::slice::from_ref(&all), std::slice::from_ref(&all)).unwrap();
        assert_eq!(d, 0.0);
        assert!(dist_to_partition(&[], &classes).is_err());
        assert!(dist_to_partition(&[set(n, &[0])], &[]).is_err());
    }

    #[test]
    fn covering_and_support_summaries() {
        let extents = vec![set(5, &[0]), set(5, &[0, 1]), set(5, &[1])];
        assert_eq!(covering(&extents, 5), 2);
        assert!((avg_support(&extents).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(covering(&[], 5), 0);
        assert!(avg_support(&[]).is_err());
    }

    #[test]
    fn partitions_from_raw_labels_and_names() {
        let (p, names) = Partition::from_names(&["b", "a", "b", "c"]).unwrap();
        assert_eq!(p.labels(), &[0, 1, 0, 2]);
        assert_eq!(names, vec!["b", "a", "c"]);
        assert_eq!(p.n_classes(), 3);
        let classes = p.classes();
        assert_eq!(classes[0].iter().collect::<Vec<_>>(), vec![0, 2]);

        let q = Partition::from_labels(&[7, 7, 9]).unwrap();
        assert_eq!(q.labels(), &[0, 0, 1]);

        let shuffled = p.shuffled(3);
        assert_eq!(shuffled.n_classes(), p.n_classes());
        let mut a: Vec<usize> = p.labels().to_vec();
        let mut b: Vec<usize> = shuffled.labels().to_vec();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b, "shuffling preserves class sizes");
        assert_eq!(shuffled, p.shuffled(3), "same seed, same shuffle");
    }

    #[test]
    fn f_measure_golden_values() {
        let truth = Partition::from_labels(&[0, 0, 1, 1, 2, 2]).unwrap();
        assert!((overall_f_measure(&truth, &truth).unwrap() - 1.0).abs() < 1e-12);
        // Everything in one cluster: each class of size 2 scores
        // F1 = 2*2/(2+6) = 0.5.
        let blob = Partition::from_labels(&[0; 6]).unwrap();
        assert!((overall_f_measure(&truth, &blob).unwrap() - 0.5).abs() < 1e-12);
        let other = Partition::from_labels(&[0, 0, 1]).unwrap();
        assert!(overall_f_measure(&truth, &other).is_err());
    }

    #[test]
    fn euclidean_matrix_golden() {
        let rows = vec![vec![0.0, 0.0], vec![3.0, 4.0]];
        let m = euclidean_matrix(&rows).unwrap();
        assert!((m.get(0, 1) - 5.0).abs() < 1e-12);
        assert_eq!(m.get(0, 0), 0.0);
        assert!(euclidean_matrix(&[vec![1.0], vec![1.0, 2.0]]).is_err());
    }

    #[test]
    fn k_medoids_recovers_separated_blobs() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut rows = Vec::new();
        let mut truth_raw = Vec::new();
        for (cx, cy, label) in [(0.0, 0.0, 0usize), (10.0, 10.0, 1usize)] {
            for _ in 0..20 {
                rows.push(vec![
                    sample_normal(&mut rng, cx, 0.5),
                    sample_normal(&mut rng, cy, 0.5),
                ]);
                truth_raw.push(label);
            }
        }
        let truth = Partition::from_labels(&truth_raw).unwrap();
        let m = euclidean_matrix(&rows).unwrap();
        let hits = k_medoids_trials(&m, 2, 100, 0)
            .unwrap()
            .iter()
            .filter(|p| (overall_f_measure(&truth, p).unwrap() - 1.0).abs() < 1e-12)
            .count();
        assert!(hits >= 95, "only {hits}/100 trials recovered the blobs");

        assert!(k_medoids(&m, 0, 1, 0).is_err());
        assert!(k_medoids(&m, 41, 1, 0).is_err());
        assert!(k_medoids(&m, 2, 0, 0).is_err());
        // Same seed, same clustering; best-of-trials picks one of the
        // per-trial partitions.
        assert_eq!(
            k_medoids(&m, 2, 5, 9).unwrap(),
            k_medoids(&m, 2, 5, 9).unwrap()
        );
        let trials = k_medoids_trials(&m, 2, 5, 9).unwrap();
        assert!(trials.contains(&k_medoids(&m, 2, 5, 9).unwrap()));
    }

    #[test]
    fn k_medoids_handles_duplicates_and_k_equals_n() {
        let rows = vec![vec![0.0], vec![0.0], vec![5.0]];
        let m = euclidean_matrix(&rows).unwrap();
        let p = k_medoids(&m, 2, 3, 1).unwrap();
        assert_eq!(p.labels()[0], p.labels()[1]);
        assert_ne!(p.labels()[0], p.labels()[2]);
        // k = n degenerates to (at most) singletons without panicking.
        let q = k_medoids(&m, 3, 2, 1).unwrap();
        assert!(q.n_classes() <= 3);
        assert_ne!(q.labels()[0], q.labels()[2]);

        // With distinct points, k = n puts every object on its own medoid.
        let distinct = euclidean_matrix(&[vec![0.0], vec![2.0], vec![5.0]]).unwrap();
        let singletons = k_medoids(&distinct, 3, 1, 4).unwrap();
        let identity = Partition::from_labels(&[0, 1, 2]).unwrap();
        assert!((overall_f_measure(&identity, &singletons).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jaccard_satisfies_the_triangle_inequality() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let mut sets = Vec::new();
            for _ in 0..3 {
                let mut s = BitSet::new(12);
                for i in 0..12 {
                    if rng.random_bool(0.4) {
                        s.insert(i);
                    }
                }
                if s.is_empty() {
                    s.insert(rng.random_range(0..12));
                }
                sets.push(s);
            }
            let dab = jaccard_distance(&sets[0], &sets[1]).unwrap();
            let dbc = jaccard_distance(&sets[1], &sets[2]).unwrap();
            let dac = jaccard_distance(&sets[0], &sets[2]).unwrap();
            assert!(dac <= dab + dbc + 1e-12, "{dac} > {dab} + {dbc}");
        }
    }
}
