//! Closed itemset mining.
//!
//! [`mine_closed`] enumerates every concept — a maximal extent/intent pair
//! under the Galois connection of [`crate::encoding`] — whose support
//! reaches a threshold, by a depth-first close-by-one search: each closed
//! itemset is extended with one item at a time, the result is closed again,
//! and a branch is cut when the closure sneaks in an item below the one
//! just added (the same concept is then reachable along a canonical,
//! earlier branch). [`brute_force_closed`] replays the definition over all
//! object subsets and serves as the oracle in tests.

use crate::bitset::BitSet;
use crate::encoding::EncodedDataset;
use crate::error::{Error, Result};

/// One mined concept: the objects it covers and the items they share.
#[derive(Clone, Debug, PartialEq)]
pub struct Concept {
    pub extent: BitSet,
    pub intent: BitSet,
}

impl Concept {
    pub fn support(&self) -> usize {
        self.extent.count()
    }
}

fn check_min_support(min_support: usize) -> Result<()> {
    if min_support == 0 {
        return Err(Error::Invalid(
            "min support must be at least 1 (the empty extent is never a concept)".into(),
        ));
    }
    Ok(())
}

/// Sort concepts by descending support, ties by lexicographic intent, so
/// repeated runs print identically.
fn sort_concepts(concepts: &mut [Concept]) {
    concepts.sort_by(|a, b| {
        b.support()
            .cmp(&a.support())
            .then_with(|| a.intent.lex_cmp(&b.intent))
    });
}

/// All concepts of the dataset with support at least `min_support`.
pub fn mine_closed(ds: &EncodedDataset, min_support: usize) -> Result<Vec<Concept>> {
    check_min_support(min_support)?;
    let n = ds.n_objects();
    if n == 0 || min_support > n {
        return Ok(Vec::new());
    }
    let m = ds.vocab().len();
    let columns = ds.columns();
    let rows: Vec<&BitSet> = ds.objects().iter().map(|o| &o.items).collect();

    let intent_of = |extent: &BitSet| -> BitSet {
        let mut intent = BitSet::full(m);
        for id in extent.iter() {
            intent.intersect_with(rows[id]);
        }
        intent
    };

    let root_extent = BitSet::full(n);
    let root_intent = intent_of(&root_extent);
    let mut out = Vec::new();

    // Explicit stack of (extent, intent, next item to try).
    let mut stack = vec![(root_extent, root_intent, 0usize)];
    while let Some((extent, intent, from)) = stack.pop() {
        for (j, column) in columns.iter().enumerate().skip(from) {
            if intent.contains(j) {
                continue;
            }
            let candidate = extent.intersection(column);
            if candidate.count() < min_support {
                continue;
            }
            let closed = intent_of(&candidate);
            // Canonicity: adding j must not pull in an item before j that
            // the parent intent lacked.
            if closed.has_extra_below(&intent, j) {
                continue;
            }
            stack.push((candidate, closed, j + 1));
        }
        out.push(Concept { extent, intent });
    }

    sort_concepts(&mut out);
    Ok(out)
}

/// Definition-level enumeration over every non-empty subset of objects;
/// exponential, guarded to small datasets, meant as a test oracle.
pub fn brute_force_closed(ds: &EncodedDataset, min_support: usize) -> Result<Vec<Concept>> {
    check_min_support(min_support)?;
    let n = ds.n_objects();
    if n == 0 || min_support > n {
        return Ok(Vec::new());
    }
    if n > 20 {
        return Err(Error::Invalid(format!(
            "subset enumeration over {n} objects is out of reach; 20 is the cap"
        )));
    }
    let rows: Vec<&BitSet> = ds.objects().iter().map(|o| &o.items).collect();
    let m = ds.vocab().len();
    let mut out: Vec<Concept> = Vec::new();
    for mask in 1u32..(1u32 << n) {
        if (mask.count_ones() as usize) < min_support {
            continue;
        }
        let mut intent = BitSet::full(m);
        let mut extent = BitSet::new(n);
        for (id, row) in rows.iter().enumerate() {
            if mask & (1 << id) != 0 {
                intent.intersect_with(row);
                extent.insert(id);
            }
        }
        // Keep only subsets that are themselves closed extents.
        let full_extent = {
            let mut e = BitSet::new(n);
            for (id, row) in rows.iter().enumerate() {
                if intent.is_subset_of(row) {
                    e.insert(id);
                }
            }
            e
        };
        if full_extent == extent {
            out.push(Concept { extent, intent });
        }
    }
    sort_concepts(&mut out);
    Ok(out)
}

/// Cover edges of the concept lattice as `(parent, child)` index pairs
/// into `concepts`: the child's extent is strictly inside the parent's
/// with no third concept between them (the transitive reduction of the
/// order). Quadratic in the number of concepts per candidate edge;
/// intended for reporting, not for huge lattices.
pub fn lattice_edges(concepts: &[Concept]) -> Vec<(usize, usize)> {
    let below = |a: &Concept, b: &Concept| {
        a.extent.count() < b.extent.count() && a.extent.is_subset_of(&b.extent)
    };
    let mut edges = Vec::new();
    for (i, child) in concepts.iter().enumerate() {
        for (j, parent) in concepts.iter().enumerate() {
            if !below(child, parent) {
                continue;
            }
            let skipped = concepts
                .iter()
                .enumerate()
                .any(|(l, mid)| l != i && l != j && below(child, mid) && below(mid, parent));
            if !skipped {
                edges.push((j, i));
            }
        }
    }
    edges.sort_unstable();
    edges
}
