//! Itemset encoding of patterns and objects.
//!
//! Each (variable, alpha-tag, family, threshold-index) triple becomes one
//! item; a pattern maps to its maximal representation: the set of all
//! non-virtual atoms it implies (a prefix of each lower family, a suffix of
//! each upper family). Objects encode through `describe`, so itemset
//! inclusion mirrors the specialization order of the pattern languages and
//! closed-itemset mining enumerates closed patterns.

use std::io::{BufRead, Write};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::interval::{Interval, ThresholdGrid};
use crate::pattern::{describe, interpret, Atom, Family, IntervalPattern, Language};

/// One variable of a dataset: a name, its threshold grid, and the alpha
/// levels used when the variable holds distributions (empty otherwise).
#[derive(Clone, Debug)]
pub struct VarSpec {
    pub name: String,
    pub grid: ThresholdGrid,
    pub alphas: Vec<f64>,
}

impl VarSpec {
    pub fn plain(name: impl Into<String>, grid: ThresholdGrid) -> Self {
        VarSpec {
            name: name.into(),
            grid,
            alphas: Vec::new(),
        }
    }

    pub fn tagged(name: impl Into<String>, grid: ThresholdGrid, alphas: Vec<f64>) -> Self {
        VarSpec {
            name: name.into(),
            grid,
            alphas,
        }
    }

    fn slots(&self) -> usize {
        self.alphas.len().max(1)
    }
}

/// Identity of one item: which variable, which alpha slot (for
/// distribution variables), which atom.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ItemDef {
    pub var: usize,
    pub alpha_slot: Option<usize>,
    pub atom: Atom,
}

/// The item universe of a dataset: ids are assigned variable-major, then
/// alpha level, then family in language order, then threshold index.
#[derive(Clone, Debug)]
pub struct ItemVocabulary {
    language: Language,
    vars: Vec<VarSpec>,
    items: Vec<ItemDef>,
    var_offsets: Vec<usize>,
}

impl ItemVocabulary {
    pub fn new(language: Language, vars: Vec<VarSpec>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Invalid(
                "a vocabulary needs at least one variable".into(),
            ));
        }
        for v in &vars {
            if !v.alphas.is_empty() {
                if !matches!(language, Language::I | Language::Ic) {
                    return Err(Error::Invalid(format!(
                        "alpha-tagged atoms are defined for languages i and ic, not {language}"
                    )));
                }
                let strictly_increasing = v.alphas.windows(2).all(|w| w[0] < w[1]);
                if !strictly_increasing || v.alphas.iter().any(|&a| !(0.0 < a && a < 0.5)) {
                    return Err(Error::Invalid(format!(
                        "alpha levels for `{}` must be strictly increasing inside ]0, 0.5[",
                        v.name
                    )));
                }
            }
        }
        let families = language.families();
        let mut items = Vec::new();
        let mut var_offsets = Vec::with_capacity(vars.len());
        for (vi, v) in vars.iter().enumerate() {
            var_offsets.push(items.len());
            let k = v.grid.k();
            for slot in 0..v.slots() {
                let alpha_slot = (!v.alphas.is_empty()).then_some(slot);
                for &family in families {
                    for index in 1..=k {
                        items.push(ItemDef {
                            var: vi,
                            alpha_slot,
                            atom: Atom::new(family, index),
                        });
                    }
                }
            }
        }
        Ok(ItemVocabulary {
            language,
            vars,
            items,
            var_offsets,
        })
    }

    pub fn language(&self) -> Language {
        self.language
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[ItemDef] {
        &self.items
    }

    pub fn item(&self, id: usize) -> &ItemDef {
        &self.items[id]
    }

    /// Text of an item, e.g. `cap>5.74` or `a0.1:cap>5.74`.
    pub fn atom_text(&self, id: usize) -> String {
        let def = &self.items[id];
        let grid = &self.vars[def.var].grid;
        match def.alpha_slot {
            Some(slot) => format!(
                "a{}:{}",
                self.vars[def.var].alphas[slot],
                def.atom.text(grid)
            ),
            None => def.atom.text(grid),
        }
    }

    fn slot_of(&self, var: usize, alpha: Option<f64>) -> Result<usize> {
        let spec = self
            .vars
            .get(var)
            .ok_or_else(|| Error::Invalid(format!("variable index {var} out of range")))?;
        match (alpha, spec.alphas.is_empty()) {
            (None, true) => Ok(0),
            (Some(a), false) => spec.alphas.iter().position(|&x| x == a).ok_or_else(|| {
                Error::Invalid(format!("alpha {a} not configured for `{}`", spec.name))
            }),
            (None, false) => Err(Error::Invalid(format!(
                "variable `{}` is alpha-tagged; an alpha level is required",
                spec.name
            ))),
            (Some(_), true) => Err(Error::Invalid(format!(
                "variable `{}` carries no alpha tags",
                spec.name
            ))),
        }
    }

    /// Start id and threshold count of the (variable, slot) item block.
    fn section(&self, var: usize, slot: usize) -> (usize, usize) {
        let k = self.vars[var].grid.k();
        let fam_count = self.language.families().len();
        let start = self.var_offsets[var] + slot * fam_count * k;
        (start, k)
    }

    pub fn id_of(
        &self,
        var: usize,
        alpha: Option<f64>,
        family: Family,
        index: usize,
    ) -> Result<usize> {
        let slot = self.slot_of(var, alpha)?;
        let (start, k) = self.section(var, slot);
        let fam_pos = self
            .language
            .families()
            .iter()
            .position(|&f| f == family)
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "family {family:?} is not part of language {}",
                    self.language
                ))
            })?;
        if !(1..=k).contains(&index) {
            return Err(Error::AtomIndex { index, k });
        }
        Ok(start + fam_pos * k + (index - 1))
    }

    /// Maximal representation of a pattern: every non-virtual atom it
    /// implies, as items of the variable's (and alpha level's) section.
    pub fn encode_pattern(
        &self,
        q: &IntervalPattern,
        var: usize,
        alpha: Option<f64>,
    ) -> Result<BitSet> {
        let mut items = BitSet::new(self.len());
        self.encode_pattern_into(q, var, alpha, &mut items)?;
        Ok(items)
    }

    pub(crate) fn encode_pattern_into(
        &self,
        q: &IntervalPattern,
        var: usize,
        alpha: Option<f64>,
        items: &mut BitSet,
    ) -> Result<()> {
        if q.language() != self.language {
            return Err(Error::LanguageMismatch {
                expected: self.language,
                found: q.language(),
            });
        }
        let slot = self.slot_of(var, alpha)?;
        let (start, k) = self.section(var, slot);
        let families = self.language.families();
        let fam_pos = |f: Family| families.iter().position(|&x| x == f).unwrap();
        let set_range = |items: &mut BitSet, f: Family, lo: usize, hi: usize| {
            let base = start + fam_pos(f) * k;
            for index in lo..=hi {
                items.insert(base + index - 1);
            }
        };
        let set_prefix =
            |items: &mut BitSet, f: Family, upto: usize| set_range(items, f, 1, upto.min(k));
        let set_suffix =
            |items: &mut BitSet, f: Family, from: usize| set_range(items, f, from.max(1), k);
        if q.is_bottom() {
            // The always-false pattern sits below everything: it implies
            // every atom of both inclusion families.
            set_prefix(items, Family::SubGt, k);
            set_suffix(items, Family::SubLe, 1);
            return Ok(());
        }
        set_prefix(items, q.lower().family, q.lower().index);
        set_suffix(items, q.upper().family, q.upper().index);
        if let Some(a) = q.extra_lower() {
            set_prefix(items, a.family, a.index);
        }
        if let Some(b) = q.extra_upper() {
            set_suffix(items, b.family, b.index);
        }
        Ok(())
    }

    /// Read the pattern back from the (variable, alpha) section of an
    /// itemset. Items of other sections are ignored; within the section
    /// each lower family must form a prefix `{1..i}` and each upper family
    /// a suffix `{j..k}`, otherwise the itemset is not the maximal
    /// representation of any pattern.
    pub fn decode_pattern(
        &self,
        items: &BitSet,
        var: usize,
        alpha: Option<f64>,
    ) -> Result<IntervalPattern> {
        let slot = self.slot_of(var, alpha)?;
        let (start, k) = self.section(var, slot);
        let grid = &self.vars[var].grid;
        let families = self.language.families();

        let mut strongest = Vec::with_capacity(families.len());
        for (fi, &family) in families.iter().enumerate() {
            let base = start + fi * k;
            let present: Vec<usize> = (1..=k).filter(|i| items.contains(base + i - 1)).collect();
            if family.is_lower() {
                let top = present.last().copied().unwrap_or(0);
                if present.len() != top {
                    return Err(Error::InvalidItemset(format!(
                        "family {family:?} of variable `{}` is not a prefix",
                        self.vars[var].name
                    )));
                }
                strongest.push(top);
            } else {
                let bottom = present.first().copied().unwrap_or(k + 1);
                if present.len() != k + 1 - bottom {
                    return Err(Error::InvalidItemset(format!(
                        "family {family:?} of variable `{}` is not a suffix",
                        self.vars[var].name
                    )));
                }
                strongest.push(bottom);
            }
        }

        match self.language {
            Language::I => IntervalPattern::new(Language::I, grid, strongest[0], strongest[1]),
            Language::Num => {
                if strongest[0] >= strongest[1] {
                    return Err(Error::InvalidItemset(
                        "scalar atoms cross; no value satisfies them all".into(),
                    ));
                }
                IntervalPattern::new(Language::Num, grid, strongest[0], strongest[1])
            }
            Language::C => {
                if strongest[0] >= strongest[1] {
                    if strongest[0] == k && strongest[1] == 1 {
                        return Ok(IntervalPattern::bottom_c(grid));
                    }
                    return Err(Error::InvalidItemset(
                        "inclusion atoms cross; only the full section stands for bottom".into(),
                    ));
                }
                IntervalPattern::new(Language::C, grid, strongest[0], strongest[1])
            }
            Language::Ic => {
                IntervalPattern::ic(grid, strongest[0], strongest[1], strongest[2], strongest[3])
            }
        }
    }

    /// Every (variable, alpha) section of the vocabulary with a display
    /// label: the variable name, suffixed `@alpha` for tagged sections.
    pub fn sections(&self) -> Vec<(usize, Option<f64>, String)> {
        let mut out = Vec::new();
        for (vi, v) in self.vars.iter().enumerate() {
            if v.alphas.is_empty() {
                out.push((vi, None, v.name.clone()));
            } else {
                for &a in &v.alphas {
                    out.push((vi, Some(a), format!("{}@{a}", v.name)));
                }
            }
        }
        out
    }

    /// Range statements of every constrained section, `; `-joined;
    /// `always` when no section is constrained.
    pub fn interpretation(&self, items: &BitSet) -> Result<String> {
        let mut parts = Vec::new();
        for (var, alpha, label) in self.sections() {
            let q = self.decode_pattern(items, var, alpha)?;
            let grid = &self.vars[var].grid;
            if q == IntervalPattern::top(q.language(), grid) {
                continue;
            }
            parts.push(format!("{label}: {}", interpret(&q, grid)?));
        }
        if parts.is_empty() {
            Ok("always".into())
        } else {
            Ok(parts.join("; "))
        }
    }

    /// Itemset of one object whose variables are interval-valued.
    pub fn encode_interval_row(&self, values: &[Interval]) -> Result<BitSet> {
        self.check_plain_row(values.len())?;
        let mut items = BitSet::new(self.len());
        for (vi, iv) in values.iter().enumerate() {
            let q = describe(iv, &self.vars[vi].grid, self.language)?;
            self.encode_pattern_into(&q, vi, None, &mut items)?;
        }
        Ok(items)
    }

    /// Itemset of one object whose variables are scalars. In language
    /// `num` the scalar atoms apply; in the interval languages the scalar
    /// stands as its degenerate interval at the grid resolution.
    pub fn encode_point_row(&self, values: &[f64]) -> Result<BitSet> {
        self.check_plain_row(values.len())?;
        let mut items = BitSet::new(self.len());
        for (vi, &y) in values.iter().enumerate() {
            let grid = &self.vars[vi].grid;
            let iv = Interval::point(y, grid.epsilon())?;
            let q = describe(&iv, grid, self.language)?;
            self.encode_pattern_into(&q, vi, None, &mut items)?;
        }
        Ok(items)
    }

    fn check_plain_row(&self, len: usize) -> Result<()> {
        if len != self.vars.len() {
            return Err(Error::Invalid(format!(
                "row has {len} values but the vocabulary has {} variables",
                self.vars.len()
            )));
        }
        if let Some(v) = self.vars.iter().find(|v| !v.alphas.is_empty()) {
            return Err(Error::Invalid(format!(
                "variable `{}` is alpha-tagged; encode distributions instead",
                v.name
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct EncodedObject {
    pub id: usize,
    pub label: Option<String>,
    pub items: BitSet,
}

/// A dataset after encoding: the vocabulary plus one itemset per object.
#[derive(Clone, Debug)]
pub struct EncodedDataset {
    name: String,
    vocab: ItemVocabulary,
    objects: Vec<EncodedObject>,
}

impl EncodedDataset {
    pub fn new(
        name: impl Into<String>,
        vocab: ItemVocabulary,
        objects: Vec<EncodedObject>,
    ) -> Result<Self> {
        for (pos, o) in objects.iter().enumerate() {
            if o.id != pos {
                return Err(Error::Invalid(format!(
                    "object ids must be dense and ordered; found {} at position {pos}",
                    o.id
                )));
            }
            if o.items.universe_len() != vocab.len() {
                return Err(Error::Invalid(format!(
                    "object {} itemset sized {} against a {}-item vocabulary",
                    o.id,
                    o.items.universe_len(),
                    vocab.len()
                )));
            }
        }
        Ok(EncodedDataset {
            name: name.into(),
            vocab,
            objects,
        })
    }

    pub fn from_itemsets(
        name: impl Into<String>,
        vocab: ItemVocabulary,
        itemsets: Vec<BitSet>,
    ) -> Result<Self> {
        let objects = itemsets
            .into_iter()
            .enumerate()
            .map(|(id, items)| EncodedObject {
                id,
                label: None,
                items,
            })
            .collect();
        Self::new(name, vocab, objects)
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.objects.len() {
            return Err(Error::Invalid(format!(
                "{} labels for {} objects",
                labels.len(),
                self.objects.len()
            )));
        }
        for (o, l) in self.objects.iter_mut().zip(labels) {
            o.label = Some(l);
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vocab(&self) -> &ItemVocabulary {
        &self.vocab
    }

    pub fn objects(&self) -> &[EncodedObject] {
        &self.objects
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    /// Extent of a single item: the objects whose itemset holds it.
    pub fn item_extent(&self, item: usize) -> BitSet {
        let mut extent = BitSet::new(self.objects.len());
        for o in &self.objects {
            if o.items.contains(item) {
                extent.insert(o.id);
            }
        }
        extent
    }

    /// All item extents, indexed by item id.
    pub fn columns(&self) -> Vec<BitSet> {
        (0..self.vocab.len()).map(|i| self.item_extent(i)).collect()
    }
}

/// Objects whose itemsets contain the query itemset.
pub fn ext(items: &BitSet, ds: &EncodedDataset) -> BitSet {
    let mut extent = BitSet::new(ds.n_objects());
    for o in ds.objects() {
        if items.is_subset_of(&o.items) {
            extent.insert(o.id);
        }
    }
    extent
}

/// Items shared by every object of the extent. The empty extent yields the
/// full vocabulary; callers that must treat "no support" specially should
/// check emptiness first (as [`closure`] does).
pub fn int(extent: &BitSet, ds: &EncodedDataset) -> BitSet {
    let mut items = BitSet::full(ds.vocab().len());
    for id in extent.iter() {
        items.intersect_with(&ds.objects()[id].items);
    }
    items
}

/// Closure `int(ext(x))`; an itemset no object supports is reported as
/// [`Error::EmptySupport`] rather than closed onto the full vocabulary.
pub fn closure(items: &BitSet, ds: &EncodedDataset) -> Result<BitSet> {
    let extent = ext(items, ds);
    if extent.is_empty() {
        return Err(Error::EmptySupport);
    }
    Ok(int(&extent, ds))
}

/// One line per object: its item ids in ascending order, space separated.
/// Objects with no items produce an empty line, so line number = object id.
pub fn write_fimi(ds: &EncodedDataset, mut w: impl Write) -> Result<()> {
    for o in ds.objects() {
        let line: Vec<String> = o.items.iter().map(|i| i.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Sidecar mapping: `item_id<TAB>variable<TAB>atom_text`.
pub fn write_item_map(ds: &EncodedDataset, mut w: impl Write) -> Result<()> {
    let vocab = ds.vocab();
    for id in 0..vocab.len() {
        let def = vocab.item(id);
        writeln!(
            w,
            "{id}\t{}\t{}",
            vocab.vars()[def.var].name,
            vocab.atom_text(id)
        )?;
    }
    Ok(())
}

/// Labeled export: `id,label,atoms` with the atom texts joined by `;`.
pub fn write_labeled_csv(ds: &EncodedDataset, mut w: impl Write) -> Result<()> {
    writeln!(w, "id,label,atoms")?;
    let vocab = ds.vocab();
    for o in ds.objects() {
        let atoms: Vec<String> = o.items.iter().map(|i| vocab.atom_text(i)).collect();
        writeln!(
            w,
            "{},{},{}",
            o.id,
            o.label.as_deref().unwrap_or(""),
            atoms.join(";")
        )?;
    }
    Ok(())
}

/// Parse a FIMI file back into itemsets over a known universe size.
pub fn parse_fimi(r: impl BufRead, n_items: usize) -> Result<Vec<BitSet>> {
    let mut out = Vec::new();
    for (ln, line) in r.lines().enumerate() {
        let line = line?;
        let mut items = BitSet::new(n_items);
        for tok in line.split_whitespace() {
            let id: usize = tok
                .parse()
                .map_err(|_| Error::Data(format!("line {}: bad item id `{tok}`", ln + 1)))?;
            if id >= n_items {
                return Err(Error::Data(format!(
                    "line {}: item id {id} outside the {n_items}-item vocabulary",
                    ln + 1
                )));
            }
            items.insert(id);
        }
        out.push(items);
    }
    Ok(out)
}
