#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rcw_core::foundations::{bs, BitString};
use rcw_core::kraft_chaitin::KcAllocator;
use rcw_core::machines::{Interpreter, PrefixMachine, TableMachine};

pub fn three_entry() -> PrefixMachine {
    PrefixMachine::Table(
        TableMachine::new(
            "three",
            vec![
                (bs("0"), bs("00")),
                (bs("10"), bs("01")),
                (bs("11"), bs("111")),
            ],
        )
        .unwrap(),
    )
}

pub fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> BitString {
    (0..len).map(|_| rng.gen::<bool>()).collect()
}

/// A prefix-free table whose keys have Kraft sum strictly below 1.
pub fn random_table(
    rng: &mut ChaCha8Rng,
    id: &str,
    max_entries: usize,
    max_key_len: usize,
    out_lens: &[usize],
) -> TableMachine {
    let mut kc = KcAllocator::new();
    // permanently unused codeword, so the keys never fill the whole space
    kc.request(max_key_len + 1).unwrap();
    let count = rng.gen_range(1..=max_entries);
    let mut entries = Vec::new();
    for _ in 0..count {
        let len = rng.gen_range(1..=max_key_len);
        if let Ok(key) = kc.request(len) {
            let out_len = out_lens[rng.gen_range(0..out_lens.len())];
            entries.push((key, random_bits(rng, out_len)));
        }
    }
    TableMachine::new(id, entries).unwrap()
}

pub fn random_interpreter(rng: &mut ChaCha8Rng, id: &str) -> PrefixMachine {
    let aux = random_table(rng, &format!("{id}-aux"), 8, 6, &[1, 2, 3, 4, 5]);
    PrefixMachine::Interpreter(Interpreter::new(id, vec![Arc::new(aux)]))
}

/// Pairwise check, independent of any sorting.
pub fn brute_prefix_free(keys: &[BitString]) -> bool {
    for (i, a) in keys.iter().enumerate() {
        for (j, b) in keys.iter().enumerate() {
            if i != j && a.is_prefix_of(b) {
                return false;
            }
        }
    }
    true
}
