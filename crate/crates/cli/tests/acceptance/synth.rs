//! Deterministic synthetic corpora for the acceptance suite: a labeled
//! function dataset with planted permission vocabulary, and a small
//! contract corpus with planted predecessor/successor edits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use sollens_core::corpus::ContractRecord;
use sollens_core::textprep::FunctionRecord;

/// Words whose presence defines the positive class.
pub const PLANTED: [&str; 5] = ["oracle", "divest", "mask", "compress", "round"];

const BACKGROUND: [&str; 45] = [
    "require", "balance", "sender", "value", "total", "supply", "storage", "memory", "emit",
    "event", "index", "count", "limit", "update", "check", "state", "data", "hash", "block",
    "time", "stamp", "number", "price", "rate", "pool", "stake", "vote", "claim", "swap", "trade",
    "order", "book", "list", "node", "tree", "root", "leaf", "proof", "verify", "sign", "nonce",
    "gas", "fee", "cost", "payout",
];

/// A few default-keyword words sprinkled into both classes so the keyword
/// baseline fires, but uninformatively.
const KEYWORDISH: [&str; 3] = ["pause", "mint", "stop"];

fn camel(a: &str, b: &str) -> String {
    let mut upper = b.chars();
    match upper.next() {
        Some(first) => format!("{a}{}{}", first.to_ascii_uppercase(), upper.as_str()),
        None => a.to_owned(),
    }
}

/// 2,000 functions; the positive rule is presence of any planted word, and
/// 10% of the rule-positive examples are mislabeled negative.
pub fn permission_corpus(seed: u64) -> Vec<FunctionRecord> {
    let n = 2000;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(n);
    let mut positives = Vec::new();

    for i in 0..n {
        let planted_here = rng.random_range(0..100) < 35;
        let name = camel(
            BACKGROUND[rng.random_range(0..BACKGROUND.len())],
            BACKGROUND[rng.random_range(0..BACKGROUND.len())],
        );
        let mut body = Vec::new();
        let words = rng.random_range(8..=16);
        for _ in 0..words {
            body.push(BACKGROUND[rng.random_range(0..BACKGROUND.len())]);
        }
        if rng.random_range(0..100) < 8 {
            body.push(KEYWORDISH[rng.random_range(0..KEYWORDISH.len())]);
        }
        if planted_here {
            let distinct = 1 + usize::from(rng.random_range(0..100) < 40);
            for _ in 0..distinct {
                let word = PLANTED[rng.random_range(0..PLANTED.len())];
                for _ in 0..rng.random_range(1..=3) {
                    body.push(word);
                }
            }
        }
        // shuffle the body words deterministically
        for j in (1..body.len()).rev() {
            let k = rng.random_range(0..=j);
            body.swap(j, k);
        }
        let statements: Vec<String> = body
            .chunks(3)
            .map(|chunk| format!("        {};", chunk.join(" = ")))
            .collect();
        let text = format!(
            "function {name}(uint256 value) public {{\n{}\n    }}",
            statements.join("\n")
        );
        if planted_here {
            positives.push(i);
        }
        records.push(FunctionRecord {
            contract: format!("0x{:040x}", i),
            name,
            text,
            modifiers: vec![],
            label: planted_here,
        });
    }

    // mislabel 10% of the rule-positive examples
    let flips = positives.len() / 10;
    for _ in 0..flips {
        let pick = rng.random_range(0..positives.len());
        let idx = positives.swap_remove(pick);
        records[idx].label = false;
    }
    records
}

fn addr(tag: u64) -> String {
    format!("0x{:040x}", tag)
}

fn contract(tag: u64, creator: u64, at: i64, destructed: bool, source: &str) -> ContractRecord {
    ContractRecord {
        address: addr(tag),
        creator: addr(0xc000 + creator),
        created_at: at,
        destructed,
        destructed_at: destructed.then_some(at + 1000),
        source: source.to_owned(),
        compiler_version: Some("v0.4.25".to_owned()),
    }
}

fn crowdsale(name: &str, rate: u32, with_selfdestruct: bool, with_modifier: bool) -> String {
    let guard = if with_modifier { " onlyOwner" } else { "" };
    let modifier_decl = if with_modifier {
        "\n    modifier onlyOwner { require(msg.sender == owner); _; }\n"
    } else {
        "\n"
    };
    let close = if with_selfdestruct {
        format!("    function close(address to){guard} {{ selfdestruct(to); }}\n")
    } else {
        format!("    function close(address to){guard} {{ paused = true; to.transfer(this.balance); }}\n")
    };
    format!(
        "pragma solidity ^0.4.25;\n\
         contract {name} {{\n\
         \x20   address owner;\n\
         \x20   bool paused;\n\
         \x20   uint256 rate = {rate};\n\
         \x20   mapping(address => uint256) contributions;\n\
         \x20   function {name}() public {{ owner = msg.sender; }}\n\
         \x20   function() payable {{ contributions[msg.sender] += msg.value; }}\n\
         \x20   function tokensFor(address who) public view returns (uint256) {{ return contributions[who] * rate; }}\n\
         \x20   function withdraw(address to, uint256 amount){guard} {{ require(amount <= this.balance); to.transfer(amount); }}\n\
         {close}{modifier_decl}}}\n"
    )
}

fn registry(name: &str, extra_fns: usize, destructible: bool) -> String {
    let mut body = String::new();
    for i in 0..extra_fns {
        body.push_str(&format!(
            "    function entry{i}(bytes32 key, address who) public returns (bool) {{ records[key] = who; emit Registered(key, who, {i}); return true; }}\n"
        ));
    }
    let kill = if destructible {
        "    function retire() public { selfdestruct(msg.sender); }\n"
    } else {
        ""
    };
    format!(
        "pragma solidity ^0.4.25;\n\
         contract {name} {{\n\
         \x20   mapping(bytes32 => address) records;\n\
         \x20   event Registered(bytes32 key, address who, uint256 slot);\n\
         {body}{kill}}}\n"
    )
}

fn voting(name: &str, quorum: u32) -> String {
    format!(
        "pragma solidity ^0.4.25;\n\
         contract {name} {{\n\
         \x20   uint256 quorum = {quorum};\n\
         \x20   mapping(address => bool) voted;\n\
         \x20   uint256 yes; uint256 no;\n\
         \x20   function voteYes() public {{ require(!voted[msg.sender]); voted[msg.sender] = true; yes += 1; }}\n\
         \x20   function voteNo() public {{ require(!voted[msg.sender]); voted[msg.sender] = true; no += 1; }}\n\
         \x20   function passed() public view returns (bool) {{ return yes + no >= quorum && yes > no; }}\n\
         }}\n"
    )
}

pub struct LineageCorpus {
    pub records: Vec<ContractRecord>,
    /// (predecessor, successor) addresses of the planted pairs.
    pub planted: Vec<(String, String)>,
}

/// Twenty contracts across six creators: four planted predecessor to
/// successor edits, ten unrelated contracts, and two inert extras under a
/// creator with no self-destructed contract.
pub fn lineage_corpus() -> LineageCorpus {
    let mut records = Vec::new();
    let mut planted = Vec::new();

    // planted pairs: small edits of a shared template per creator
    let pairs = [
        (1u64, crowdsale("SaleAlpha", 100, true, false), crowdsale("SaleAlpha", 100, true, true)),
        (2, crowdsale("SaleBeta", 250, true, false), crowdsale("SaleBeta", 300, false, false)),
        (3, registry("NameBook", 4, true), registry("NameBook", 5, false)),
        (4, crowdsale("SaleGamma", 42, true, true), crowdsale("SaleGamma", 77, true, true)),
    ];
    let mut tag = 0x1000;
    for (creator, pred_src, succ_src) in pairs {
        let pred = contract(tag, creator, 100, true, &pred_src);
        let succ = contract(tag + 1, creator, 200, false, &succ_src);
        planted.push((pred.address.clone(), succ.address.clone()));
        records.push(pred);
        records.push(succ);
        tag += 2;
    }

    // unrelated contracts; some share creators with the planted pairs so
    // rejected candidate pairs exist, some form their own groups
    let unrelated = [
        (1u64, 300i64, false, voting("BoardVote", 12)),
        (1, 400, false, registry("Directory", 7, false)),
        (2, 350, false, voting("TownPoll", 40)),
        (3, 500, false, voting("ClubVote", 5)),
        (5, 100, true, voting("EarlyPoll", 9)),
        (5, 200, false, registry("Phonebook", 6, false)),
        (5, 300, false, crowdsale("SaleDelta", 9000, false, true)),
        (6, 100, false, voting("QuietVote", 3)),
        (2, 90, true, registry("OldIndex", 2, true)),
        (4, 600, false, voting("LateVote", 21)),
    ];
    for (creator, at, destructed, src) in unrelated {
        records.push(contract(tag, creator, at, destructed, &src));
        tag += 1;
    }

    // inert extras: creator 6 never self-destructs, so its group drops out
    records.push(contract(tag, 6, 200, false, &registry("SideBook", 3, false)));
    records.push(contract(tag + 1, 6, 300, false, &voting("SideVote", 2)));

    assert_eq!(records.len(), 20);
    LineageCorpus { records, planted }
}
