//! Pattern languages over a threshold grid.
//!
//! Four languages describe how a value relates to the frontiers of a
//! [`ThresholdGrid`]:
//!
//! * `num` constrains a scalar with `y > s_i` and `y <= s_j` atoms;
//! * `i` constrains an interval through non-empty intersection with the
//!   half-lines `]s_i, ->]` and `]<-, s_j]`;
//! * `c` constrains an interval through inclusion in those half-lines;
//! * `ic` conjoins both families (the inclusion atoms are exactly the
//!   negations of the intersection atoms).
//!
//! A pattern keeps at most one atom per family, the strongest one, since
//! `cap>s_2` implies `cap>s_1` and so on. Index 0 (lower families) and
//! k+1 (upper families) address the virtual domain bounds; such atoms are
//! always true and a canonical pattern stores `None` instead for the
//! optional families.
//!
//! The specialization order, the meet, and the `describe` map below make
//! each language a meet-semilattice in which `describe(v)` is the most
//! specific pattern occurring in `v`; mining closed patterns reduces to
//! closed itemsets over the encoding in [`crate::encoding`].

use std::fmt;

use crate::error::{Error, Result};
use crate::interval::{Interval, ThresholdGrid};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Language {
    Num,
    C,
    I,
    Ic,
}

impl Language {
    /// Atom families of the language, in vocabulary order.
    pub fn families(&self) -> &'static [Family] {
        match self {
            Language::Num => &[Family::NumGt, Family::NumLe],
            Language::C => &[Family::SubGt, Family::SubLe],
            Language::I => &[Family::CapGt, Family::CapLe],
            Language::Ic => &[Family::CapGt, Family::CapLe, Family::SubGt, Family::SubLe],
        }
    }

    pub fn handles_points(&self) -> bool {
        matches!(self, Language::Num)
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Language::Num => "num",
            Language::C => "c",
            Language::I => "i",
            Language::Ic => "ic",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "num" => Ok(Language::Num),
            "c" => Ok(Language::C),
            "i" => Ok(Language::I),
            "ic" => Ok(Language::Ic),
            other => Err(Error::Invalid(format!(
                "unknown language `{other}` (expected num, c, i or ic)"
            ))),
        }
    }
}

/// Atom family. `Cap*` are the intersection atoms, `Sub*` the inclusion
/// atoms, `Num*` the scalar comparisons.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Family {
    CapGt,
    CapLe,
    SubGt,
    SubLe,
    NumGt,
    NumLe,
}

impl Family {
    /// Lower families bound the value from below (`>s_i`, index 0 virtual);
    /// upper families bound it from above (`<=s_j`, index k+1 virtual).
    pub fn is_lower(&self) -> bool {
        matches!(self, Family::CapGt | Family::SubGt | Family::NumGt)
    }

    fn symbol(&self) -> &'static str {
        match self {
            Family::CapGt => "cap>",
            Family::CapLe => "cap<=",
            Family::SubGt => "sub>",
            Family::SubLe => "sub<=",
            Family::NumGt => "num>",
            Family::NumLe => "num<=",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Atom {
    pub family: Family,
    pub index: usize,
}

impl Atom {
    pub fn new(family: Family, index: usize) -> Self {
        Atom { family, index }
    }

    /// Valid index range against a grid with `k` thresholds.
    pub(crate) fn check(&self, k: usize) -> Result<()> {
        let ok = if self.family.is_lower() {
            self.index <= k
        } else {
            (1..=k + 1).contains(&self.index)
        };
        if ok {
            Ok(())
        } else {
            Err(Error::AtomIndex {
                index: self.index,
                k,
            })
        }
    }

    /// Virtual atoms sit on the domain bounds and hold vacuously.
    pub fn is_virtual(&self, k: usize) -> bool {
        if self.family.is_lower() {
            self.index == 0
        } else {
            self.index == k + 1
        }
    }

    /// Truth of the atom on an interval value. Scalars are expected as
    /// their degenerate interval `]y-eps, y]`, where the `Num*` families
    /// read the scalar back from the upper bound.
    pub fn holds(&self, iv: &Interval, g: &ThresholdGrid) -> Result<bool> {
        self.check(g.k())?;
        if self.is_virtual(g.k()) {
            return Ok(true);
        }
        let s = g.bound(self.index);
        Ok(match self.family {
            Family::CapGt => iv.hi() > s,
            Family::CapLe => iv.lo() < s,
            Family::SubGt => iv.lo() >= s,
            Family::SubLe => iv.hi() <= s,
            Family::NumGt => iv.hi() > s,
            Family::NumLe => iv.hi() <= s,
        })
    }

    /// Rendering with the threshold value spelled out, e.g. `cap>5.74`.
    pub fn text(&self, g: &ThresholdGrid) -> String {
        format!("{}{}", self.family.symbol(), g.bound(self.index))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}s{}", self.family.symbol(), self.index)
    }
}

/// A pattern in one of the four languages, in canonical form.
///
/// `lower`/`upper` hold the main pair of the language (`num`/`cap`/`sub`
/// depending on the language); for `ic` the optional `extra_*` fields hold
/// the strongest inclusion atoms, `None` when only the virtual one holds.
/// `bottom` marks the designated always-false pattern of language `c`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntervalPattern {
    lang: Language,
    bottom: bool,
    lower: Atom,
    upper: Atom,
    extra_lower: Option<Atom>,
    extra_upper: Option<Atom>,
}

impl IntervalPattern {
    fn main_families(lang: Language) -> (Family, Family) {
        match lang {
            Language::Num => (Family::NumGt, Family::NumLe),
            Language::C => (Family::SubGt, Family::SubLe),
            Language::I | Language::Ic => (Family::CapGt, Family::CapLe),
        }
    }

    /// Least specific pattern of the language: both atoms virtual.
    pub fn top(lang: Language, g: &ThresholdGrid) -> Self {
        let (lf, uf) = Self::main_families(lang);
        IntervalPattern {
            lang,
            bottom: false,
            lower: Atom::new(lf, 0),
            upper: Atom::new(uf, g.k() + 1),
            extra_lower: None,
            extra_upper: None,
        }
    }

    /// The always-false pattern of language `c`.
    pub fn bottom_c(g: &ThresholdGrid) -> Self {
        IntervalPattern {
            lang: Language::C,
            bottom: true,
            lower: Atom::new(Family::SubGt, g.k()),
            upper: Atom::new(Family::SubLe, 1),
            extra_lower: None,
            extra_upper: None,
        }
    }

    /// Pattern `(lower_idx, upper_idx)` for the single-pair languages.
    /// Language `c` and `num` require the bounds not to cross; use
    /// [`IntervalPattern::bottom_c`] for the always-false pattern.
    pub fn new(
        lang: Language,
        g: &ThresholdGrid,
        lower_idx: usize,
        upper_idx: usize,
    ) -> Result<Self> {
        if lang == Language::Ic {
            return Self::ic(g, lower_idx, upper_idx, 0, g.k() + 1);
        }
        let (lf, uf) = Self::main_families(lang);
        let lower = Atom::new(lf, lower_idx);
        let upper = Atom::new(uf, upper_idx);
        lower.check(g.k())?;
        upper.check(g.k())?;
        if lang != Language::I && lower_idx >= upper_idx {
            return Err(Error::InvalidPattern(format!(
                "{lang} pattern bounds cross: s{lower_idx} >= s{upper_idx}"
            )));
        }
        Ok(IntervalPattern {
            lang,
            bottom: false,
            lower,
            upper,
            extra_lower: None,
            extra_upper: None,
        })
    }

    /// Conjunction pattern of language `ic`. Virtual inclusion indices
    /// (0 or k+1) normalize to absent atoms.
    pub fn ic(
        g: &ThresholdGrid,
        cap_lower: usize,
        cap_upper: usize,
        sub_lower: usize,
        sub_upper: usize,
    ) -> Result<Self> {
        let k = g.k();
        let lower = Atom::new(Family::CapGt, cap_lower);
        let upper = Atom::new(Family::CapLe, cap_upper);
        lower.check(k)?;
        upper.check(k)?;
        let extra_lower = Atom::new(Family::SubGt, sub_lower);
        let extra_upper = Atom::new(Family::SubLe, sub_upper);
        extra_lower.check(k)?;
        extra_upper.check(k)?;
        Ok(IntervalPattern {
            lang: Language::Ic,
            bottom: false,
            lower,
            upper,
            extra_lower: (sub_lower != 0).then_some(extra_lower),
            extra_upper: (sub_upper != k + 1).then_some(extra_upper),
        })
    }

    pub fn language(&self) -> Language {
        self.lang
    }

    pub fn is_bottom(&self) -> bool {
        self.bottom
    }

    pub fn lower(&self) -> Atom {
        self.lower
    }

    pub fn upper(&self) -> Atom {
        self.upper
    }

    pub fn extra_lower(&self) -> Option<Atom> {
        self.extra_lower
    }

    pub fn extra_upper(&self) -> Option<Atom> {
        self.extra_upper
    }

    /// All stored atoms, virtual ones included.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = vec![self.lower, self.upper];
        out.extend(self.extra_lower);
        out.extend(self.extra_upper);
        out
    }

    /// Whether every atom of the pattern is true on the value.
    pub fn occurs_in(&self, iv: &Interval, g: &ThresholdGrid) -> Result<bool> {
        if self.bottom {
            return Ok(false);
        }
        for atom in self.atoms() {
            if !atom.holds(iv, g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Specialization test: true when `other` is at least as specific as
    /// `self`. Lower-family indices must not decrease and upper-family
    /// indices must not increase, across every family of the language.
    pub fn leq(&self, other: &IntervalPattern) -> Result<bool> {
        if self.lang != other.lang {
            return Err(Error::LanguageMismatch {
                expected: self.lang,
                found: other.lang,
            });
        }
        if other.bottom {
            return Ok(true);
        }
        if self.bottom {
            return Ok(false);
        }
        let lower_ok = other.lower.index >= self.lower.index;
        let upper_ok = other.upper.index <= self.upper.index;
        let extra_lower_ok = match (self.extra_lower, other.extra_lower) {
            (Some(a), Some(b)) => b.index >= a.index,
            (Some(_), None) => false,
            (None, _) => true,
        };
        let extra_upper_ok = match (self.extra_upper, other.extra_upper) {
            (Some(a), Some(b)) => b.index <= a.index,
            (Some(_), None) => false,
            (None, _) => true,
        };
        Ok(lower_ok && upper_ok && extra_lower_ok && extra_upper_ok)
    }

    /// Greatest lower bound in the specialization order: the most specific
    /// pattern occurring in everything both operands occur in.
    pub fn meet(&self, other: &IntervalPattern) -> Result<IntervalPattern> {
        if self.lang != other.lang {
            return Err(Error::LanguageMismatch {
                expected: self.lang,
                found: other.lang,
            });
        }
        if self.bottom {
            return Ok(other.clone());
        }
        if other.bottom {
            return Ok(self.clone());
        }
        let meet_lower = |a: Option<Atom>, b: Option<Atom>| match (a, b) {
            (Some(x), Some(y)) => Some(if x.index <= y.index { x } else { y }),
            _ => None,
        };
        let meet_upper = |a: Option<Atom>, b: Option<Atom>| match (a, b) {
            (Some(x), Some(y)) => Some(if x.index >= y.index { x } else { y }),
            _ => None,
        };
        Ok(IntervalPattern {
            lang: self.lang,
            bottom: false,
            lower: Atom::new(self.lower.family, self.lower.index.min(other.lower.index)),
            upper: Atom::new(self.upper.family, self.upper.index.max(other.upper.index)),
            extra_lower: meet_lower(self.extra_lower, other.extra_lower),
            extra_upper: meet_upper(self.extra_upper, other.extra_upper),
        })
    }
}

impl fmt::Display for IntervalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bottom {
            return f.write_str("bottom");
        }
        write!(f, "({}, {}", self.lower, self.upper)?;
        if let Some(a) = self.extra_lower {
            write!(f, ", {a}")?;
        }
        if let Some(a) = self.extra_upper {
            write!(f, ", {a}")?;
        }
        f.write_str(")")
    }
}

/// Most specific pattern of the language occurring in the value.
///
/// The value may extend past the grid domain (inter-quantile intervals of
/// unbounded distributions do), as long as it overlaps it; only the real
/// thresholds decide the result. Language `num` expects the degenerate
/// interval of a scalar, `]y - eps, y]` at the grid resolution.
pub fn describe(iv: &Interval, g: &ThresholdGrid, lang: Language) -> Result<IntervalPattern> {
    let dom = g.domain();
    if iv.hi() <= dom.lo() || iv.lo() >= dom.hi() {
        return Err(Error::OutsideDomain {
            lo: iv.lo(),
            hi: iv.hi(),
            dom_lo: dom.lo(),
            dom_hi: dom.hi(),
        });
    }
    match lang {
        Language::Num => {
            let eps = g.epsilon();
            if (iv.width() - eps).abs() > 1e-6 * eps.max(1.0) {
                return Err(Error::Invalid(format!(
                    "language num describes scalar values; got an interval of width {} (resolution {})",
                    iv.width(),
                    eps
                )));
            }
            let y = iv.hi();
            IntervalPattern::new(lang, g, g.greatest_below(y), g.least_at_least(y))
        }
        Language::I => {
            IntervalPattern::new(lang, g, g.greatest_below(iv.hi()), g.least_above(iv.lo()))
        }
        Language::C => IntervalPattern::new(
            lang,
            g,
            g.greatest_at_most(iv.lo()),
            g.least_at_least(iv.hi()),
        ),
        Language::Ic => IntervalPattern::ic(
            g,
            g.greatest_below(iv.hi()),
            g.least_above(iv.lo()),
            g.greatest_at_most(iv.lo()),
            g.least_at_least(iv.hi()),
        ),
    }

    // The guarantee upper <= lower + 1 for languages num and i follows from
    // lo < hi; see the order-theoretic tests below.
}

/// What a pattern says about a value, as a single range statement (or a
/// conjunction of two for language `ic`).
#[derive(Clone, PartialEq, Debug)]
pub enum Interpretation {
    /// The value meets `]lo, hi]`.
    Intersects(Interval),
    /// The value covers the closed range `[lo, hi]`.
    Contains {
        lo: f64,
        hi: f64,
    },
    /// The value lies inside `]lo, hi]` (scalars: `lo < y <= hi`).
    Within(Interval),
    Conjunction(Box<Interpretation>, Box<Interpretation>),
}

impl Interpretation {
    /// Re-evaluate the range statement on a value.
    pub fn test(&self, iv: &Interval) -> bool {
        match self {
            Interpretation::Intersects(r) => iv.intersects(r),
            Interpretation::Contains { lo, hi } => iv.contains_closed(*lo, *hi),
            Interpretation::Within(r) => iv.is_subset_of(r),
            Interpretation::Conjunction(a, b) => a.test(iv) && b.test(iv),
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interpretation::Intersects(r) => write!(f, "intersects {r}"),
            Interpretation::Contains { lo, hi } => write!(f, "contains [{lo}, {hi}]"),
            Interpretation::Within(r) => write!(f, "within {r}"),
            Interpretation::Conjunction(a, b) => write!(f, "{a} and {b}"),
        }
    }
}

/// Equivalent range statement of a pattern.
///
/// For the intersection pair, crossed bounds (`upper <= lower`) mean the
/// value spans the in-between frontiers: "contains `[s_u, s_l + eps]`".
/// Straight bounds mean plain intersection with `]s_l, s_u]`. Inclusion
/// pairs read as containment of the value within `]s_i, s_j]`.
pub fn interpret(p: &IntervalPattern, g: &ThresholdGrid) -> Result<Interpretation> {
    if p.is_bottom() {
        return Err(Error::InvalidPattern(
            "the bottom pattern has no range interpretation".into(),
        ));
    }
    let k = g.k();
    let cap_part = |l: usize, u: usize| -> Result<Interpretation> {
        Ok(if u > l {
            Interpretation::Intersects(Interval::new(g.bound(l), g.bound(u))?)
        } else {
            Interpretation::Contains {
                lo: g.bound(u),
                hi: g.bound(l) + g.epsilon(),
            }
        })
    };
    match p.language() {
        Language::Num | Language::C => Ok(Interpretation::Within(Interval::new(
            g.bound(p.lower().index),
            g.bound(p.upper().index),
        )?)),
        Language::I => cap_part(p.lower().index, p.upper().index),
        Language::Ic => {
            let l = p.lower().index;
            let u = p.upper().index;
            let a = p.extra_lower().map_or(0, |x| x.index);
            let b = p.extra_upper().map_or(k + 1, |x| x.index);
            let cap_virtual = l == 0 && u == k + 1;
            let sub_virtual = a == 0 && b == k + 1;
            let within = Interpretation::Within(Interval::new(g.bound(a), g.bound(b))?);
            if sub_virtual {
                cap_part(l, u)
            } else if cap_virtual {
                Ok(within)
            } else {
                Ok(Interpretation::Conjunction(
                    Box::new(cap_part(l, u)?),
                    Box::new(within),
                ))
            }
        }
    }
}

/// One representative interval per distinguishability class of the grid.
///
/// Two intervals are indistinguishable when every atom of every language
/// agrees on them; the classes are indexed by the pair (greatest frontier
/// below the upper bound, least frontier above the lower bound), giving
/// (k+1)(k+2)/2 classes. The representative for class `(l, u)` is
/// `]s_(u-1), s_(l+1)]`.
pub fn enumerate_distinguishable(g: &ThresholdGrid) -> Vec<Interval> {
    let k = g.k();
    let mut out = Vec::with_capacity((k + 1) * (k + 2) / 2);
    for l in 0..=k {
        for u in 1..=l + 1 {
            out.push(Interval::new(g.bound(u - 1), g.bound(l + 1)).expect("grid bounds increase"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Domain ]0, 5], thresholds {1, 2, 3, 4}, resolution 1: the grid of
    /// the two-object worked example used throughout.
    fn g45() -> ThresholdGrid {
        ThresholdGrid::new(0.0, 5.0, &[1.0, 2.0, 3.0, 4.0], 1.0).unwrap()
    }

    fn g2() -> ThresholdGrid {
        ThresholdGrid::new(0.0, 3.0, &[1.0, 2.0], 1.0).unwrap()
    }

    fn obj_a() -> Interval {
        Interval::new(0.0, 2.0).unwrap() // the digit word "12"
    }

    fn obj_b() -> Interval {
        Interval::new(1.0, 4.0).unwrap() // the digit word "234"
    }

    #[test]
    fn atom_semantics() {
        let g = g45();
        let b = obj_b();
        assert!(Atom::new(Family::CapGt, 3).holds(&b, &g).unwrap()); // 4 > 3
        assert!(!Atom::new(Family::CapGt, 4).holds(&b, &g).unwrap()); // 4 > 4 fails
        assert!(Atom::new(Family::CapLe, 2).holds(&b, &g).unwrap()); // 1 < 2
        assert!(!Atom::new(Family::CapLe, 1).holds(&b, &g).unwrap());
        assert!(Atom::new(Family::SubGt, 1).holds(&b, &g).unwrap()); // 1 >= 1
        assert!(!Atom::new(Family::SubGt, 2).holds(&b, &g).unwrap());
        assert!(Atom::new(Family::SubLe, 4).holds(&b, &g).unwrap()); // 4 <= 4
        assert!(!Atom::new(Family::SubLe, 3).holds(&b, &g).unwrap());
        // Virtual atoms hold on anything.
        assert!(Atom::new(Family::CapGt, 0).holds(&b, &g).unwrap());
        assert!(Atom::new(Family::SubLe, 5).holds(&b, &g).unwrap());
        assert!(Atom::new(Family::CapGt, 6).holds(&b, &g).is_err());
    }

    #[test]
    fn inclusion_atoms_negate_intersection_atoms() {
        let g = g45();
        let samples = [
            Interval::new(0.0, 2.0).unwrap(),
            Interval::new(1.0, 4.0).unwrap(),
            Interval::new(0.3, 0.7).unwrap(),
            Interval::new(2.5, 4.5).unwrap(),
            Interval::new(0.0, 5.0).unwrap(),
        ];
        for iv in &samples {
            for i in 1..=4 {
                let sub_gt = Atom::new(Family::SubGt, i).holds(iv, &g).unwrap();
                let cap_le = Atom::new(Family::CapLe, i).holds(iv, &g).unwrap();
                assert_ne!(sub_gt, cap_le, "sub> must negate cap<= at s{i} on {iv}");
                let sub_le = Atom::new(Family::SubLe, i).holds(iv, &g).unwrap();
                let cap_gt = Atom::new(Family::CapGt, i).holds(iv, &g).unwrap();
                assert_ne!(sub_le, cap_gt, "sub<= must negate cap> at s{i} on {iv}");
            }
        }
    }

    #[test]
    fn describe_intersection_language() {
        let g = g45();
        // "12" meets ]1,5] and ]0,1]: most specific pair (cap>s1, cap<=s1).
        let da = describe(&obj_a(), &g, Language::I).unwrap();
        assert_eq!((da.lower().index, da.upper().index), (1, 1));
        // "234" reaches past s3 and starts below s2.
        let db = describe(&obj_b(), &g, Language::I).unwrap();
        assert_eq!((db.lower().index, db.upper().index), (3, 2));
    }

    #[test]
    fn describe_inclusion_language() {
        let g = g45();
        let da = describe(&obj_a(), &g, Language::C).unwrap();
        assert_eq!((da.lower().index, da.upper().index), (0, 2)); // within ]s0, s2]
        let db = describe(&obj_b(), &g, Language::C).unwrap();
        assert_eq!((db.lower().index, db.upper().index), (1, 4)); // within ]s1, s4]
    }

    #[test]
    fn describe_conjunction_language() {
        let g = g45();
        let db = describe(&obj_b(), &g, Language::Ic).unwrap();
        assert_eq!((db.lower().index, db.upper().index), (3, 2));
        assert_eq!(db.extra_lower().unwrap().index, 1);
        assert_eq!(db.extra_upper().unwrap().index, 4);
        // Whole-domain values only satisfy virtual inclusion atoms.
        let whole = describe(&Interval::new(0.0, 5.0).unwrap(), &g, Language::Ic).unwrap();
        assert_eq!(whole.extra_lower(), None);
        assert_eq!(whole.extra_upper(), None);
    }

    #[test]
    fn describe_scalars() {
        let g = g45();
        let p = describe(&Interval::point(3.0, 1.0).unwrap(), &g, Language::Num).unwrap();
        // 3 > s2 and 3 <= s3: the cell ]2, 3].
        assert_eq!((p.lower().index, p.upper().index), (2, 3));
        let edge = describe(&Interval::point(4.0, 1.0).unwrap(), &g, Language::Num).unwrap();
        assert_eq!((edge.lower().index, edge.upper().index), (3, 4));
        // Non-point intervals are rejected in language num.
        assert!(describe(&obj_b(), &g, Language::Num).is_err());
    }

    #[test]
    fn describe_whole_domain_crosses_every_frontier() {
        let g = g45();
        let whole = Interval::new(0.0, 5.0).unwrap();
        let p = describe(&whole, &g, Language::I).unwrap();
        assert_eq!((p.lower().index, p.upper().index), (4, 1));
        // Read back: the value contains the closed range [s1, s4 + eps].
        let interp = interpret(&p, &g).unwrap();
        assert_eq!(interp, Interpretation::Contains { lo: 1.0, hi: 5.0 });
        assert!(interp.test(&whole));
        // In language c only the domain itself encloses it.
        let pc = describe(&whole, &g, Language::C).unwrap();
        assert_eq!((pc.lower().index, pc.upper().index), (0, 5));
    }

    #[test]
    fn describe_rejects_values_off_the_domain() {
        let g = g45();
        assert!(describe(&Interval::new(-3.0, -1.0).unwrap(), &g, Language::I).is_err());
        assert!(describe(&Interval::new(5.0, 7.0).unwrap(), &g, Language::I).is_err());
        // Overlap suffices: quantile intervals of unbounded cdfs stick out.
        assert!(describe(&Interval::new(-3.0, 1.5).unwrap(), &g, Language::I).is_ok());
    }

    #[test]
    fn describe_bounds_never_cross_past_one_cell() {
        let g = g2();
        let steps: Vec<f64> = (0..=12).map(|i| i as f64 * 0.25).collect();
        for &lo in &steps {
            for &hi in &steps {
                if hi <= lo || hi > 3.0 {
                    continue;
                }
                let iv = Interval::new(lo, hi).unwrap();
                let p = describe(&iv, &g, Language::I).unwrap();
                assert!(p.upper().index <= p.lower().index + 1, "{iv}: {p}");
            }
        }
        for y in [0.25, 0.5, 1.0, 1.5, 2.0, 2.75, 3.0] {
            let p = describe(&Interval::point(y, 1.0).unwrap(), &g, Language::Num).unwrap();
            assert_eq!(p.upper().index, p.lower().index + 1, "scalar {y}");
        }
    }

    #[test]
    fn meet_matches_worked_example() {
        let g = g45();
        let da = describe(&obj_a(), &g, Language::I).unwrap();
        let db = describe(&obj_b(), &g, Language::I).unwrap();
        let m = da.meet(&db).unwrap();
        assert_eq!((m.lower().index, m.upper().index), (1, 2));
        assert_eq!(
            interpret(&m, &g).unwrap(),
            Interpretation::Intersects(Interval::new(1.0, 2.0).unwrap())
        );

        let ca = describe(&obj_a(), &g, Language::C).unwrap();
        let cb = describe(&obj_b(), &g, Language::C).unwrap();
        let mc = ca.meet(&cb).unwrap();
        assert_eq!((mc.lower().index, mc.upper().index), (0, 4));
        assert_eq!(
            interpret(&mc, &g).unwrap(),
            Interpretation::Within(Interval::new(0.0, 4.0).unwrap())
        );
    }

    #[test]
    fn meet_rejects_language_mixing() {
        let g = g45();
        let a = IntervalPattern::top(Language::I, &g);
        let b = IntervalPattern::top(Language::C, &g);
        assert!(a.meet(&b).is_err());
        assert!(a.leq(&b).is_err());
    }

    #[test]
    fn bottom_is_most_specific_and_neutral_for_meet() {
        let g = g45();
        let bot = IntervalPattern::bottom_c(&g);
        let q = IntervalPattern::new(Language::C, &g, 1, 3).unwrap();
        assert!(q.leq(&bot).unwrap());
        assert!(!bot.leq(&q).unwrap());
        assert_eq!(bot.meet(&q).unwrap(), q);
        assert!(!bot.occurs_in(&obj_a(), &g).unwrap());
    }

    /// Every pattern of a language over a small grid, for oracle checks.
    fn all_patterns(lang: Language, g: &ThresholdGrid) -> Vec<IntervalPattern> {
        let k = g.k();
        let mut out = Vec::new();
        match lang {
            Language::I => {
                for l in 0..=k {
                    for u in 1..=k + 1 {
                        out.push(IntervalPattern::new(lang, g, l, u).unwrap());
                    }
                }
            }
            Language::Num | Language::C => {
                for l in 0..=k {
                    for u in l + 1..=k + 1 {
                        out.push(IntervalPattern::new(lang, g, l, u).unwrap());
                    }
                }
                if lang == Language::C {
                    out.push(IntervalPattern::bottom_c(g));
                }
            }
            Language::Ic => {
                for l in 0..=k {
                    for u in 1..=k + 1 {
                        for a in 0..=k {
                            for b in 1..=k + 1 {
                                out.push(IntervalPattern::ic(g, l, u, a, b).unwrap());
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn meet_is_the_greatest_lower_bound() {
        let g = g2();
        for lang in [Language::Num, Language::C, Language::I, Language::Ic] {
            let pats = all_patterns(lang, &g);
            for p in &pats {
                for q in &pats {
                    let m = p.meet(q).unwrap();
                    assert!(m.leq(p).unwrap() && m.leq(q).unwrap(), "{m} below {p},{q}");
                    for z in &pats {
                        if z.leq(p).unwrap() && z.leq(q).unwrap() {
                            assert!(z.leq(&m).unwrap(), "{lang}: {z} <= meet({p},{q}) = {m}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn order_is_reflexive_antisymmetric_transitive() {
        let g = g2();
        for lang in [Language::Num, Language::C, Language::I, Language::Ic] {
            let pats = all_patterns(lang, &g);
            for p in &pats {
                assert!(p.leq(p).unwrap());
                for q in &pats {
                    if p.leq(q).unwrap() && q.leq(p).unwrap() {
                        assert_eq!(p, q);
                    }
                    for z in &pats {
                        if p.leq(q).unwrap() && q.leq(z).unwrap() {
                            assert!(p.leq(z).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn describe_is_the_most_specific_occurring_pattern() {
        let g = g2();
        let reps = enumerate_distinguishable(&g);
        for lang in [Language::C, Language::I, Language::Ic] {
            let pats = all_patterns(lang, &g);
            for iv in &reps {
                let d = describe(iv, &g, lang).unwrap();
                assert!(d.occurs_in(iv, &g).unwrap(), "{lang}: {d} occurs in {iv}");
                for q in &pats {
                    assert_eq!(
                        q.occurs_in(iv, &g).unwrap(),
                        q.leq(&d).unwrap(),
                        "{lang}: occurrence of {q} in {iv} must match q <= describe = {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn distinguishable_counts_follow_the_triangular_formula() {
        for k in 0..=6usize {
            let thresholds: Vec<f64> = (1..=k).map(|i| i as f64).collect();
            let g = ThresholdGrid::new(0.0, k as f64 + 1.0, &thresholds, 1.0).unwrap();
            let reps = enumerate_distinguishable(&g);
            assert_eq!(reps.len(), (k + 1) * (k + 2) / 2, "k = {k}");
        }
    }

    #[test]
    fn representatives_are_pairwise_distinguishable() {
        let g = g45();
        let reps = enumerate_distinguishable(&g);
        let signature = |iv: &Interval| -> Vec<bool> {
            let mut sig = Vec::new();
            for i in 1..=g.k() {
                sig.push(Atom::new(Family::CapGt, i).holds(iv, &g).unwrap());
                sig.push(Atom::new(Family::CapLe, i).holds(iv, &g).unwrap());
            }
            sig
        };
        for (i, a) in reps.iter().enumerate() {
            for b in reps.iter().skip(i + 1) {
                assert_ne!(signature(a), signature(b), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn interpretation_matches_atom_truth_on_every_class() {
        let g = g45();
        let reps = enumerate_distinguishable(&g);
        for lang in [Language::C, Language::I, Language::Ic] {
            for iv in &reps {
                let p = describe(iv, &g, lang).unwrap();
                let interp = interpret(&p, &g).unwrap();
                for probe in &reps {
                    assert_eq!(
                        p.occurs_in(probe, &g).unwrap(),
                        interp.test(probe),
                        "{lang}: `{interp}` vs atoms of {p} on {probe}"
                    );
                }
            }
        }
    }

    #[test]
    fn conjunction_interpretation_example() {
        let g = g2();
        // (cap>s2, cap<=s2, sub>s1): spans the s2 frontier inside ]s1, s3].
        let p = IntervalPattern::ic(&g, 2, 2, 1, 3).unwrap();
        let interp = interpret(&p, &g).unwrap();
        assert_eq!(
            interp,
            Interpretation::Conjunction(
                Box::new(Interpretation::Contains { lo: 2.0, hi: 3.0 }),
                Box::new(Interpretation::Within(Interval::new(1.0, 3.0).unwrap())),
            )
        );
        assert_eq!(interp.to_string(), "contains [2, 3] and within ]1, 3]");
    }

    #[test]
    fn top_interprets_as_whole_domain_intersection() {
        let g = g45();
        let top = IntervalPattern::top(Language::I, &g);
        assert_eq!(
            interpret(&top, &g).unwrap(),
            Interpretation::Intersects(Interval::new(0.0, 5.0).unwrap())
        );
    }
}
