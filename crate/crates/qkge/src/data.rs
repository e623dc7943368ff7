//! Triple files, vocabularies, and the in-memory knowledge graph.
//!
//! Datasets are directories holding `train.txt`, `valid.txt`, and `test.txt`,
//! each a UTF-8 text file with one `head<TAB>relation<TAB>tail` triple per
//! line. The vocabulary assigns ids by **sorting the unique surface strings
//! lexicographically** (entities and relations separately), so ids depend
//! only on the set of strings — not on file order — and checkpoints remain
//! portable across re-reads of the same dataset.
//!
//! [`KnowledgeGraph`] additionally indexes, over the union of all three
//! splits, every known tail set `{t : (h, r, t)}` and head set
//! `{h : (h, r, t)}`; ranking uses these for filtered evaluation.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A triple as read from disk, before vocabulary resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTriple {
    pub head: String,
    pub relation: String,
    pub tail: String,
}

/// A triple with vocabulary ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub head: usize,
    pub relation: usize,
    pub tail: usize,
}

impl Triple {
    pub fn new(head: usize, relation: usize, tail: usize) -> Self {
        Self {
            head,
            relation,
            tail,
        }
    }
}

/// Which dataset split to read in evaluation commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Split {
    Valid,
    Test,
}

impl Split {
    pub fn name(&self) -> &'static str {
        match self {
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

/// Bidirectional mapping between surface strings and dense ids.
///
/// Ids are lexicographic ranks over the sorted unique strings, entities and
/// relations separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    entities: Vec<String>,
    relations: Vec<String>,
    entity_ids: HashMap<String, usize>,
    relation_ids: HashMap<String, usize>,
}

impl Vocabulary {
    /// Builds the vocabulary from every surface form occurring in `triples`
    /// (heads and tails both feed the entity set).
    pub fn build<'a, I>(triples: I) -> Self
    where
        I: IntoIterator<Item = &'a RawTriple>,
    {
        let mut entity_set: HashSet<&str> = HashSet::new();
        let mut relation_set: HashSet<&str> = HashSet::new();
        for t in triples {
            entity_set.insert(&t.head);
            entity_set.insert(&t.tail);
            relation_set.insert(&t.relation);
        }
        let mut entities: Vec<String> = entity_set.into_iter().map(String::from).collect();
        let mut relations: Vec<String> = relation_set.into_iter().map(String::from).collect();
        entities.sort_unstable();
        relations.sort_unstable();
        Self::from_sorted(entities, relations)
    }

    /// Rebuilds a vocabulary from already-ordered lists (checkpoint loading).
    ///
    /// The lists must be strictly lexicographically sorted; anything else
    /// means the checkpoint was edited or corrupted.
    pub fn from_lists(entities: Vec<String>, relations: Vec<String>) -> Result<Self> {
        for (kind, list) in [("entity", &entities), ("relation", &relations)] {
            if let Some(w) = list.windows(2).find(|w| w[0] >= w[1]) {
                return Err(Error::Integrity(format!(
                    "{kind} list is not strictly sorted: {:?} precedes {:?}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self::from_sorted(entities, relations))
    }

    fn from_sorted(entities: Vec<String>, relations: Vec<String>) -> Self {
        let entity_ids = entities
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let relation_ids = relations
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self {
            entities,
            relations,
            entity_ids,
            relation_ids,
        }
    }

    pub fn n_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn n_relations(&self) -> usize {
        self.relations.len()
    }

    /// Sorted entity surface strings, indexed by id.
    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    /// Sorted relation surface strings, indexed by id.
    pub fn relations(&self) -> &[String] {
        &self.relations
    }

    pub fn entity_id(&self, name: &str) -> Option<usize> {
        self.entity_ids.get(name).copied()
    }

    pub fn relation_id(&self, name: &str) -> Option<usize> {
        self.relation_ids.get(name).copied()
    }

    pub fn entity_name(&self, id: usize) -> Result<&str> {
        self.entities
            .get(id)
            .map(String::as_str)
            .ok_or(Error::EntityIdOutOfRange {
                id,
                n_entities: self.entities.len(),
            })
    }

    pub fn relation_name(&self, id: usize) -> Result<&str> {
        self.relations
            .get(id)
            .map(String::as_str)
            .ok_or(Error::RelationIdOutOfRange {
                id,
                n_relations: self.relations.len(),
            })
    }

    /// Resolves entity surface form `name`, or fails with a hint listing the
    /// closest known names by edit distance.
    pub fn resolve_entity(&self, name: &str) -> Result<usize> {
        self.entity_id(name).ok_or_else(|| Error::UnknownSymbol {
            kind: "entity",
            name: name.to_string(),
            hint: nearest_hint(name, &self.entities),
        })
    }

    /// Resolves relation surface form `name`, with the same hint behavior as
    /// [`Vocabulary::resolve_entity`].
    pub fn resolve_relation(&self, name: &str) -> Result<usize> {
        self.relation_id(name).ok_or_else(|| Error::UnknownSymbol {
            kind: "relation",
            name: name.to_string(),
            hint: nearest_hint(name, &self.relations),
        })
    }

    /// Resolves one raw triple into ids.
    pub fn resolve(&self, raw: &RawTriple) -> Result<Triple> {
        Ok(Triple {
            head: self.resolve_entity(&raw.head)?,
            relation: self.resolve_relation(&raw.relation)?,
            tail: self.resolve_entity(&raw.tail)?,
        })
    }
}

/// Formats a "did you mean" fragment with up to three closest names.
fn nearest_hint(name: &str, candidates: &[String]) -> String {
    if candidates.is_empty() {
        return String::new();
    }
    let mut scored: Vec<(usize, &String)> = candidates
        .iter()
        .map(|c| (edit_distance(name, c), c))
        .collect();
    scored.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let nearest: Vec<&str> = scored.iter().take(3).map(|(_, c)| c.as_str()).collect();
    format!(" (closest matches: {})", nearest.join(", "))
}

/// Levenshtein distance over Unicode scalar values.
fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            curr[j + 1] = sub.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// Reads one triples file: tab-separated, three fields per line.
///
/// Blank lines are skipped; any other deviation is a
/// [`Error::MalformedTriple`] with the 1-based line number.
pub fn read_triples_file(path: &Path) -> Result<Vec<RawTriple>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut triples = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let (head, relation, tail) = match (fields.next(), fields.next(), fields.next()) {
            (Some(h), Some(r), Some(t)) if fields.next().is_none() => (h, r, t),
            _ => {
                return Err(Error::MalformedTriple {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    content: line.to_string(),
                })
            }
        };
        if head.is_empty() || relation.is_empty() || tail.is_empty() {
            return Err(Error::MalformedTriple {
                path: path.to_path_buf(),
                line: idx + 1,
                content: line.to_string(),
            });
        }
        triples.push(RawTriple {
            head: head.to_string(),
            relation: relation.to_string(),
            tail: tail.to_string(),
        });
    }
    Ok(triples)
}

/// A loaded dataset: vocabulary, the three splits, and filter indexes over
/// the union of all splits.
#[derive(Clone, Debug)]
pub struct KnowledgeGraph {
    vocab: Vocabulary,
    train: Vec<Triple>,
    valid: Vec<Triple>,
    test: Vec<Triple>,
    known_tails: HashMap<(usize, usize), HashSet<usize>>,
    known_heads: HashMap<(usize, usize), HashSet<usize>>,
}

impl KnowledgeGraph {
    /// Loads `train.txt`, `valid.txt`, and `test.txt` from `dir`.
    ///
    /// The vocabulary is built over all three splits together, so valid/test
    /// symbols unseen in training still receive ids.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let raw_train = read_triples_file(&dir.join("train.txt"))?;
        let raw_valid = read_triples_file(&dir.join("valid.txt"))?;
        let raw_test = read_triples_file(&dir.join("test.txt"))?;
        let vocab = Vocabulary::build(raw_train.iter().chain(&raw_valid).chain(&raw_test));
        let resolve_all = |raws: &[RawTriple]| -> Result<Vec<Triple>> {
            raws.iter().map(|r| vocab.resolve(r)).collect()
        };
        let train = resolve_all(&raw_train)?;
        let valid = resolve_all(&raw_valid)?;
        let test = resolve_all(&raw_test)?;
        Ok(Self::from_parts(vocab, train, valid, test))
    }

    /// Assembles a graph from already-resolved splits (synthetic datasets,
    /// checkpoint-driven evaluation).
    pub fn from_parts(
        vocab: Vocabulary,
        train: Vec<Triple>,
        valid: Vec<Triple>,
        test: Vec<Triple>,
    ) -> Self {
        let mut known_tails: HashMap<(usize, usize), HashSet<usize>> = HashMap::new();
        let mut known_heads: HashMap<(usize, usize), HashSet<usize>> = HashMap::new();
        for t in train.iter().chain(&valid).chain(&test) {
            known_tails
                .entry((t.head, t.relation))
                .or_default()
                .insert(t.tail);
            known_heads
                .entry((t.relation, t.tail))
                .or_default()
                .insert(t.head);
        }
        Self {
            vocab,
            train,
            valid,
            test,
            known_tails,
            known_heads,
        }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn n_entities(&self) -> usize {
        self.vocab.n_entities()
    }

    pub fn n_relations(&self) -> usize {
        self.vocab.n_relations()
    }

    pub fn train(&self) -> &[Triple] {
        &self.train
    }

    pub fn valid(&self) -> &[Triple] {
        &self.valid
    }

    pub fn test(&self) -> &[Triple] {
        &self.test
    }

    pub fn split(&self, split: Split) -> &[Triple] {
        match split {
            Split::Valid => &self.valid,
            Split::Test => &self.test,
        }
    }

    /// Whether `(head, relation, tail)` occurs in **any** split.
    pub fn is_known_tail(&self, head: usize, relation: usize, tail: usize) -> bool {
        self.known_tails
            .get(&(head, relation))
            .is_some_and(|s| s.contains(&tail))
    }

    /// Whether any split contains `(head, relation, tail)`, looked up from
    /// the `(relation, tail)` side.
    pub fn is_known_head(&self, head: usize, relation: usize, tail: usize) -> bool {
        self.known_heads
            .get(&(relation, tail))
            .is_some_and(|s| s.contains(&head))
    }

    /// All tails `t` with `(head, relation, t)` in some split.
    pub fn known_tails(&self, head: usize, relation: usize) -> Option<&HashSet<usize>> {
        self.known_tails.get(&(head, relation))
    }

    /// All heads `h` with `(h, relation, tail)` in some split.
    pub fn known_heads(&self, relation: usize, tail: usize) -> Option<&HashSet<usize>> {
        self.known_heads.get(&(relation, tail))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn raw(h: &str, r: &str, t: &str) -> RawTriple {
        RawTriple {
            head: h.into(),
            relation: r.into(),
            tail: t.into(),
        }
    }

    #[test]
    fn vocabulary_ids_are_lexicographic_and_order_independent() {
        let forward = [raw("zebra", "eats", "grass"), raw("ant", "eats", "leaf")];
        let backward = [raw("ant", "eats", "leaf"), raw("zebra", "eats", "grass")];
        let v1 = Vocabulary::build(forward.iter());
        let v2 = Vocabulary::build(backward.iter());
        assert_eq!(v1, v2);
        assert_eq!(v1.entities(), &["ant", "grass", "leaf", "zebra"]);
        assert_eq!(v1.entity_id("ant"), Some(0));
        assert_eq!(v1.entity_id("zebra"), Some(3));
        assert_eq!(v1.relation_id("eats"), Some(0));
    }

    #[test]
    fn heads_and_tails_share_the_entity_table() {
        let triples = [raw("a", "r", "b")];
        let v = Vocabulary::build(triples.iter());
        assert_eq!(v.n_entities(), 2);
        assert_eq!(v.entity_id("a"), v.resolve(&triples[0]).map(|t| t.head).ok());
        assert_eq!(v.entity_id("b"), Some(1));
    }

    #[test]
    fn from_lists_requires_strict_sorting() {
        assert!(Vocabulary::from_lists(vec!["a".into(), "b".into()], vec!["r".into()]).is_ok());
        assert!(matches!(
            Vocabulary::from_lists(vec!["b".into(), "a".into()], vec![]),
            Err(Error::Integrity(_))
        ));
        assert!(matches!(
            Vocabulary::from_lists(vec!["a".into(), "a".into()], vec![]),
            Err(Error::Integrity(_))
        ));
    }

    #[test]
    fn unknown_symbols_fail_with_nearby_hints() {
        let triples = [raw("apple", "grows_on", "tree")];
        let v = Vocabulary::build(triples.iter());
        let err = v.resolve_entity("aple").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("aple") && msg.contains("apple"), "message: {msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn edit_distance_basics() {
        assert_eq!(edit_distance("", "abc"), 3);
        assert_eq!(edit_distance("kitten", "sitting"), 3);
        assert_eq!(edit_distance("same", "same"), 0);
    }

    #[test]
    fn read_triples_parses_and_reports_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("train.txt");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "a\tr\tb").unwrap();
        writeln!(f).unwrap();
        writeln!(f, "b\tr\tc").unwrap();
        drop(f);
        let triples = read_triples_file(&path).unwrap();
        assert_eq!(triples.len(), 2);
        assert_eq!(triples[1], raw("b", "r", "c"));

        let bad = dir.path().join("bad.txt");
        std::fs::write(&bad, "a\tr\tb\nmalformed line\n").unwrap();
        match read_triples_file(&bad) {
            Err(Error::MalformedTriple { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected MalformedTriple, got {other:?}"),
        }

        let four = dir.path().join("four.txt");
        std::fs::write(&four, "a\tr\tb\textra\n").unwrap();
        assert!(matches!(
            read_triples_file(&four),
            Err(Error::MalformedTriple { line: 1, .. })
        ));
    }

    #[test]
    fn load_dir_builds_vocab_over_all_splits() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("train.txt"), "a\tr\tb\n").unwrap();
        std::fs::write(dir.path().join("valid.txt"), "b\tr\tc\n").unwrap();
        std::fs::write(dir.path().join("test.txt"), "c\ts\ta\n").unwrap();
        let kg = KnowledgeGraph::load_dir(dir.path()).unwrap();
        assert_eq!(kg.n_entities(), 3);
        assert_eq!(kg.n_relations(), 2);
        assert_eq!(kg.train().len(), 1);
        assert_eq!(kg.valid().len(), 1);
        assert_eq!(kg.test().len(), 1);
    }

    #[test]
    fn load_dir_fails_cleanly_on_missing_file() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("train.txt"), "a\tr\tb\n").unwrap();
        match KnowledgeGraph::load_dir(dir.path()) {
            Err(Error::Io { path, .. }) => {
                assert!(path.ends_with("valid.txt"), "path: {path:?}")
            }
            other => panic!("expected Io error, got {other:?}"),
        }
    }

    #[test]
    fn filter_indexes_span_every_split() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("train.txt"), "a\tr\tb\n").unwrap();
        std::fs::write(dir.path().join("valid.txt"), "a\tr\tc\n").unwrap();
        std::fs::write(dir.path().join("test.txt"), "a\tr\td\nd\tr\tb\n").unwrap();
        let kg = KnowledgeGraph::load_dir(dir.path()).unwrap();
        let v = kg.vocab();
        let (a, b, c, d) = (
            v.entity_id("a").unwrap(),
            v.entity_id("b").unwrap(),
            v.entity_id("c").unwrap(),
            v.entity_id("d").unwrap(),
        );
        let r = v.relation_id("r").unwrap();
        // Tails of (a, r) come from train, valid, and test alike.
        for t in [b, c, d] {
            assert!(kg.is_known_tail(a, r, t));
        }
        assert!(!kg.is_known_tail(a, r, a));
        // Heads of (r, b): a (train) and d (test).
        assert!(kg.is_known_head(a, r, b));
        assert!(kg.is_known_head(d, r, b));
        assert!(!kg.is_known_head(c, r, b));
        assert_eq!(kg.known_tails(a, r).unwrap().len(), 3);
        assert_eq!(kg.known_heads(r, b).unwrap().len(), 2);
        assert!(kg.known_tails(b, r).is_none());
    }
}
