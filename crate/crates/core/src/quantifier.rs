//! Generalized quantifiers: types, truth functions, monotonicity metadata
//! and the registry that resolves quantifier names.
//!
//! A quantifier of type `<n1, ..., nk>` is interpreted on a universe `U` by
//! a truth function over `k` relations, relation `i` being a subset of
//! `U^ni`. The standard connectives are quantifiers too: `and`, `or` and
//! `implies` have type `<0, 0>` (their relations are subsets of `U^0 = {ε}`),
//! `forall` and `exists` have type `<1>`, `top` and `bot` have type `<>`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::syntax::{Tuple, Universe, Value};

/// A relation argument: a set of tuples over the universe.
pub type Relation = BTreeSet<Tuple>;

pub type TruthFn = Arc<dyn Fn(&Universe, &[Relation]) -> bool + Send + Sync>;

/// The arities `<n1, ..., nk>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuantifierType(pub Vec<usize>);

impl QuantifierType {
    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for QuantifierType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ">")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Monotonicity {
    /// Enlarging the argument never turns true into false.
    Monotone,
    /// Shrinking the argument never turns true into false.
    Antimonotone,
    Neither,
}

/// A named quantifier with its truth function and declared monotonicity,
/// one flag per argument position.
#[derive(Clone)]
pub struct QuantifierDef {
    name: Arc<str>,
    qtype: QuantifierType,
    mono: Vec<Monotonicity>,
    truth: TruthFn,
}

impl QuantifierDef {
    pub fn new(
        name: &str,
        arities: Vec<usize>,
        mono: Vec<Monotonicity>,
        truth: impl Fn(&Universe, &[Relation]) -> bool + Send + Sync + 'static,
    ) -> Result<Self, QuantifierError> {
        if mono.len() != arities.len() {
            return Err(QuantifierError::ProfileLength {
                name: name.to_string(),
                expected: arities.len(),
                found: mono.len(),
            });
        }
        Ok(QuantifierDef {
            name: Arc::from(name),
            qtype: QuantifierType(arities),
            mono,
            truth: Arc::new(truth),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn qtype(&self) -> &QuantifierType {
        &self.qtype
    }

    pub fn monotonicity(&self) -> &[Monotonicity] {
        &self.mono
    }

    pub fn is_monotone_everywhere(&self) -> bool {
        self.mono.iter().all(|m| *m == Monotonicity::Monotone)
    }

    /// Applies the truth function without validating the relations.
    pub fn truth(&self, universe: &Universe, relations: &[Relation]) -> bool {
        (self.truth)(universe, relations)
    }

    /// Applies the truth function after checking that the relations match
    /// the type and range over the universe.
    pub fn eval(&self, universe: &Universe, relations: &[Relation]) -> Result<bool, QuantifierError> {
        if relations.len() != self.qtype.arity() {
            return Err(QuantifierError::ArgumentCount {
                name: self.name.to_string(),
                expected: self.qtype.arity(),
                found: relations.len(),
            });
        }
        for (i, (rel, &n)) in relations.iter().zip(&self.qtype.0).enumerate() {
            if let Some(t) = rel
                .iter()
                .find(|t| t.len() != n || t.iter().any(|v| !universe.contains(v)))
            {
                return Err(QuantifierError::BadTuple {
                    name: self.name.to_string(),
                    position: i + 1,
                    tuple: format!("{t:?}"),
                });
            }
        }
        Ok(self.truth(universe, relations))
    }
}

impl fmt::Debug for QuantifierDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuantifierDef")
            .field("name", &self.name)
            .field("qtype", &self.qtype)
            .field("mono", &self.mono)
            .finish_non_exhaustive()
    }
}

// Quantifier identity is its name; the registry forbids two definitions
// under one name.
impl PartialEq for QuantifierDef {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.qtype == other.qtype
    }
}

impl Eq for QuantifierDef {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuantifierError {
    #[error("quantifier `{0}` is already registered")]
    Duplicate(String),
    #[error("quantifier `{0}` is built in and cannot be redefined")]
    BuiltinShadow(String),
    #[error("unknown quantifier `{0}`")]
    Unknown(String),
    #[error("quantifier `{name}` declares {found} monotonicity flags for {expected} arguments")]
    ProfileLength {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("quantifier `{name}` takes {expected} relations, got {found}")]
    ArgumentCount {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("quantifier `{name}`: tuple {tuple} in argument {position} does not match the type or universe")]
    BadTuple {
        name: String,
        position: usize,
        tuple: String,
    },
    #[error("quantifier `{name}` is not {flag:?} in position {position} (universe {universe:?})")]
    MonotonicityViolated {
        name: String,
        position: usize,
        flag: Monotonicity,
        universe: Vec<Value>,
    },
    #[error("quantifier `{name}` is too large to validate exhaustively")]
    TooLargeToValidate { name: String },
}

/// Names of the built-in quantifiers.
pub mod builtin {
    pub const TOP: &str = "top";
    pub const BOT: &str = "bot";
    pub const AND: &str = "and";
    pub const OR: &str = "or";
    pub const IMPLIES: &str = "implies";
    pub const FORALL: &str = "forall";
    pub const EXISTS: &str = "exists";
    pub const MAJORITY: &str = "majority";
    /// Families parameterized by a bound `k`, e.g. `atmost(2)`.
    pub const ATMOST: &str = "atmost";
    pub const ATLEAST: &str = "atleast";
    /// Aggregate prefixes; the full name carries the comparison, e.g. `sum_lt`.
    pub const SUM: &str = "sum";
    pub const COUNT: &str = "count";
}

/// Comparison used by the aggregate quantifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Cmp {
    pub const ALL: [Cmp; 6] = [Cmp::Lt, Cmp::Le, Cmp::Eq, Cmp::Ne, Cmp::Ge, Cmp::Gt];

    pub fn holds<T: Ord>(self, a: T, b: T) -> bool {
        match self {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Eq => a == b,
            Cmp::Ne => a != b,
            Cmp::Ge => a >= b,
            Cmp::Gt => a > b,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Cmp::Lt => "lt",
            Cmp::Le => "le",
            Cmp::Eq => "eq",
            Cmp::Ne => "ne",
            Cmp::Ge => "ge",
            Cmp::Gt => "gt",
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }

    pub fn from_suffix(s: &str) -> Option<Cmp> {
        Cmp::ALL.into_iter().find(|c| c.suffix() == s)
    }
}

/// Aggregate function of a `<1,1>` aggregate quantifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Aggregate {
    Sum,
    Count,
}

impl Aggregate {
    pub fn keyword(self) -> &'static str {
        match self {
            Aggregate::Sum => builtin::SUM,
            Aggregate::Count => builtin::COUNT,
        }
    }

    pub fn quantifier_name(self, cmp: Cmp) -> String {
        format!("{}_{}", self.keyword(), cmp.suffix())
    }

    /// Splits `sum_lt` into `(Sum, Lt)`.
    pub fn parse_name(name: &str) -> Option<(Aggregate, Cmp)> {
        let (agg, cmp) = name.split_once('_')?;
        let agg = match agg {
            builtin::SUM => Aggregate::Sum,
            builtin::COUNT => Aggregate::Count,
            _ => return None,
        };
        Some((agg, Cmp::from_suffix(cmp)?))
    }

    /// The aggregate value of a set of 1-tuples, or `None` when undefined.
    /// `SUM` is defined iff every element is an integer; `SUM(∅) = 0`.
    fn value(self, rel: &Relation) -> Option<i128> {
        match self {
            Aggregate::Count => Some(rel.len() as i128),
            Aggregate::Sum => rel.iter().try_fold(0i128, |acc, t| match t.as_slice() {
                [Value::Int(n)] => Some(acc + *n as i128),
                _ => None,
            }),
        }
    }
}

fn singleton_int(rel: &Relation) -> Option<i64> {
    let mut it = rel.iter();
    match (it.next(), it.next()) {
        (Some(t), None) => match t.as_slice() {
            [Value::Int(b)] => Some(*b),
            _ => None,
        },
        _ => None,
    }
}

fn epsilon_true(rel: &Relation) -> bool {
    rel.contains(&Vec::new())
}

/// Resolves quantifier names to definitions.
///
/// Built-ins are always present. The families `atmost(k)` and `atleast(k)`
/// are instantiated on first lookup and cached.
pub struct Registry {
    defs: HashMap<Arc<str>, Arc<QuantifierDef>>,
    family_cache: RwLock<HashMap<String, Arc<QuantifierDef>>>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<_> = self.defs.keys().collect();
        names.sort();
        f.debug_struct("Registry").field("defs", &names).finish()
    }
}

impl Registry {
    /// A registry holding only the built-in quantifiers.
    pub fn new() -> Self {
        let mut defs = HashMap::new();
        for def in builtin_defs() {
            defs.insert(def.name.clone(), Arc::new(def));
        }
        Registry {
            defs,
            family_cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn is_builtin(name: &str) -> bool {
        use builtin::*;
        matches!(name, TOP | BOT | AND | OR | IMPLIES | FORALL | EXISTS | MAJORITY)
            || Aggregate::parse_name(name).is_some()
            || parse_family(name).is_some()
    }

    pub fn register(&mut self, def: QuantifierDef) -> Result<(), QuantifierError> {
        if Self::is_builtin(def.name()) {
            return Err(QuantifierError::BuiltinShadow(def.name().to_string()));
        }
        if self.defs.contains_key(def.name()) {
            return Err(QuantifierError::Duplicate(def.name().to_string()));
        }
        self.defs.insert(def.name.clone(), Arc::new(def));
        Ok(())
    }

    /// Like [`register`](Self::register), but first checks the declared
    /// monotonicity flags exhaustively on every universe of at most three
    /// elements drawn from `{-2, ..., 2}`.
    pub fn register_validated(&mut self, def: QuantifierDef) -> Result<(), QuantifierError> {
        validate_monotonicity(&def)?;
        self.register(def)
    }

    pub fn get(&self, name: &str) -> Option<Arc<QuantifierDef>> {
        if let Some(d) = self.defs.get(name) {
            return Some(d.clone());
        }
        let (family, k) = parse_family(name)?;
        if let Some(d) = self.family_cache.read().ok()?.get(name) {
            return Some(d.clone());
        }
        let def = Arc::new(family_def(family, k));
        if let Ok(mut cache) = self.family_cache.write() {
            cache.insert(name.to_string(), def.clone());
        }
        Some(def)
    }

    pub fn resolve(&self, name: &str) -> Result<Arc<QuantifierDef>, QuantifierError> {
        self.get(name).ok_or_else(|| QuantifierError::Unknown(name.to_string()))
    }

    /// `Q^U(R1, ..., Rk)` for the quantifier called `name`.
    pub fn eval(&self, name: &str, universe: &Universe, relations: &[Relation]) -> Result<bool, QuantifierError> {
        self.resolve(name)?.eval(universe, relations)
    }

    /// Names of the fixed (non-family) registered quantifiers, sorted.
    pub fn names(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.defs.keys().map(|k| &**k).collect();
        v.sort_unstable();
        v
    }
}

#[derive(Clone, Copy)]
enum Family {
    AtMost,
    AtLeast,
}

fn parse_family(name: &str) -> Option<(Family, usize)> {
    let (head, rest) = name.split_once('(')?;
    let k = rest.strip_suffix(')')?.parse::<usize>().ok()?;
    match head {
        builtin::ATMOST => Some((Family::AtMost, k)),
        builtin::ATLEAST => Some((Family::AtLeast, k)),
        _ => None,
    }
}

fn family_def(family: Family, k: usize) -> QuantifierDef {
    use Monotonicity::*;
    match family {
        Family::AtMost => QuantifierDef::new(
            &format!("{}({k})", builtin::ATMOST),
            vec![1],
            vec![Antimonotone],
            move |_, r| r[0].len() <= k,
        ),
        Family::AtLeast => QuantifierDef::new(
            &format!("{}({k})", builtin::ATLEAST),
            vec![1],
            vec![Monotone],
            move |_, r| r[0].len() >= k,
        ),
    }
    .expect("family profile matches its type")
}

fn builtin_defs() -> Vec<QuantifierDef> {
    use Monotonicity::*;
    let mut defs = vec![
        QuantifierDef::new(builtin::TOP, vec![], vec![], |_, _| true),
        QuantifierDef::new(builtin::BOT, vec![], vec![], |_, _| false),
        QuantifierDef::new(builtin::AND, vec![0, 0], vec![Monotone, Monotone], |_, r| {
            epsilon_true(&r[0]) && epsilon_true(&r[1])
        }),
        QuantifierDef::new(builtin::OR, vec![0, 0], vec![Monotone, Monotone], |_, r| {
            epsilon_true(&r[0]) || epsilon_true(&r[1])
        }),
        QuantifierDef::new(builtin::IMPLIES, vec![0, 0], vec![Antimonotone, Monotone], |_, r| {
            r[0].is_empty() || epsilon_true(&r[1])
        }),
        QuantifierDef::new(builtin::FORALL, vec![1], vec![Monotone], |u, r| {
            u.elements().iter().all(|v| r[0].contains(std::slice::from_ref(v)))
        }),
        QuantifierDef::new(builtin::EXISTS, vec![1], vec![Monotone], |u, r| {
            r[0].iter().any(|t| t.len() == 1 && u.contains(&t[0]))
        }),
        QuantifierDef::new(builtin::MAJORITY, vec![1], vec![Monotone], |u, r| {
            let inside = u
                .elements()
                .iter()
                .filter(|v| r[0].contains(std::slice::from_ref(*v)))
                .count();
            inside > u.len() - inside
        }),
    ];
    for agg in [Aggregate::Sum, Aggregate::Count] {
        for cmp in Cmp::ALL {
            let first = match (agg, cmp) {
                (Aggregate::Count, Cmp::Ge | Cmp::Gt) => Monotone,
                (Aggregate::Count, Cmp::Le | Cmp::Lt) => Antimonotone,
                // SUM over mixed-sign integers is neither
                _ => Neither,
            };
            defs.push(QuantifierDef::new(
                &agg.quantifier_name(cmp),
                vec![1, 1],
                vec![first, Neither],
                move |_, r| match (agg.value(&r[0]), singleton_int(&r[1])) {
                    (Some(v), Some(b)) => cmp.holds(v, b as i128),
                    _ => false,
                },
            ));
        }
    }
    defs.into_iter()
        .map(|d| d.expect("builtin profile matches its type"))
        .collect()
}

/// Largest relation (in tuples) the exhaustive checker will enumerate.
const MAX_VALIDATION_TUPLES: usize = 16;

/// Checks the declared flags of `def` on one universe by enumerating every
/// combination of relations and every pair `R ⊆ R'` in each flagged
/// position.
pub fn check_monotonicity(def: &QuantifierDef, universe: &Universe) -> Result<(), QuantifierError> {
    let tuple_lists: Vec<Vec<Tuple>> = def.qtype().0.iter().map(|&n| universe.tuples(n).collect()).collect();
    if tuple_lists.iter().any(|ts| ts.len() > MAX_VALIDATION_TUPLES) {
        return Err(QuantifierError::TooLargeToValidate {
            name: def.name().to_string(),
        });
    }
    let to_rel = |pos: usize, mask: u32| -> Relation {
        tuple_lists[pos]
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, t)| t.clone())
            .collect()
    };
    let k = tuple_lists.len();
    let sizes: Vec<u32> = tuple_lists.iter().map(|ts| 1u32 << ts.len()).collect();

    for (pos, flag) in def.monotonicity().iter().enumerate() {
        if *flag == Monotonicity::Neither {
            continue;
        }
        // odometer over the other positions' masks
        let mut masks = vec![0u32; k];
        loop {
            for big in 0..sizes[pos] {
                // submasks of `big`
                let mut small = big;
                loop {
                    let mut rels: Vec<Relation> = (0..k).map(|i| to_rel(i, masks[i])).collect();
                    rels[pos] = to_rel(pos, small);
                    let v_small = def.truth(universe, &rels);
                    rels[pos] = to_rel(pos, big);
                    let v_big = def.truth(universe, &rels);
                    let ok = match flag {
                        Monotonicity::Monotone => !v_small || v_big,
                        Monotonicity::Antimonotone => !v_big || v_small,
                        Monotonicity::Neither => true,
                    };
                    if !ok {
                        return Err(QuantifierError::MonotonicityViolated {
                            name: def.name().to_string(),
                            position: pos + 1,
                            flag: *flag,
                            universe: universe.elements().to_vec(),
                        });
                    }
                    if small == 0 {
                        break;
                    }
                    small = (small - 1) & big;
                }
            }
            // advance odometer, skipping `pos`
            let mut i = 0;
            loop {
                if i == k {
                    break;
                }
                if i != pos {
                    masks[i] += 1;
                    if masks[i] < sizes[i] {
                        break;
                    }
                    masks[i] = 0;
                }
                i += 1;
            }
            if i == k {
                break;
            }
        }
    }
    Ok(())
}

/// Every universe of at most three elements drawn from `{-2, ..., 2}`,
/// including the empty one.
pub fn small_integer_universes() -> Vec<Universe> {
    use itertools::Itertools;
    let pool: Vec<Value> = (-2..=2).map(Value::Int).collect();
    (0..=3)
        .flat_map(|n| pool.iter().cloned().combinations(n))
        .map(Universe::new)
        .collect()
}

/// [`check_monotonicity`] over [`small_integer_universes`].
pub fn validate_monotonicity(def: &QuantifierDef) -> Result<(), QuantifierError> {
    small_integer_universes()
        .iter()
        .try_for_each(|u| check_monotonicity(def, u))
}
