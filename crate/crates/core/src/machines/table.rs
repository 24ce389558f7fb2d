use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::foundations::BitString;

#[derive(Clone, Debug, Default)]
struct TrieNode {
    children: [Option<usize>; 2],
    value: Option<usize>,
}

/// A finite prefix-free machine given by its graph.
#[derive(Clone, Debug)]
pub struct TableMachine {
    id: String,
    entries: BTreeMap<BitString, BitString>,
    order: Vec<(BitString, BitString)>,
    trie: Vec<TrieNode>,
}

impl TableMachine {
    /// Accepts iff the keys form a prefix-free set.
    pub fn new(id: impl Into<String>, entries: Vec<(BitString, BitString)>) -> Result<Self> {
        let mut sorted: Vec<&(BitString, BitString)> = entries.iter().collect();
        sorted.sort_by(|a, b| a.0.cmp_lex(&b.0));
        // In trie order a key's extensions follow it directly.
        for w in sorted.windows(2) {
            if w[0].0.is_prefix_of(&w[1].0) {
                return Err(Error::PrefixViolation(w[0].0.clone(), w[1].0.clone()));
            }
        }
        let mut trie = vec![TrieNode::default()];
        for (slot, (key, _)) in entries.iter().enumerate() {
            let mut node = 0;
            for &b in key.bits() {
                let next = match trie[node].children[b as usize] {
                    Some(c) => c,
                    None => {
                        trie.push(TrieNode::default());
                        let c = trie.len() - 1;
                        trie[node].children[b as usize] = Some(c);
                        c
                    }
                };
                node = next;
            }
            trie[node].value = Some(slot);
        }
        let order = entries.clone();
        Ok(Self {
            id: id.into(),
            entries: entries.into_iter().collect(),
            order,
            trie,
        })
    }

    pub fn empty(id: impl Into<String>) -> Self {
        Self::new(id, Vec::new()).expect("empty table is prefix-free")
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in length-lexicographic order of the program.
    pub fn entries(&self) -> impl Iterator<Item = (&BitString, &BitString)> {
        self.entries.iter()
    }

    pub fn get(&self, program: &BitString) -> Option<&BitString> {
        self.entries.get(program)
    }

    pub fn max_key_len(&self) -> usize {
        self.entries.keys().map(BitString::len).max().unwrap_or(0)
    }

    pub(crate) fn root(&self) -> usize {
        0
    }

    /// Follows one program bit; `None` when no key continues this way.
    pub(crate) fn step(&self, node: usize, bit: bool) -> Option<usize> {
        self.trie[node].children[bit as usize]
    }

    pub(crate) fn output_at(&self, node: usize) -> Option<&BitString> {
        self.trie[node].value.map(|slot| &self.order[slot].1)
    }
}
