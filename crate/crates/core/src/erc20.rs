//! ERC20 interface-conformance checker.
//!
//! Scans every contract unit of a source file against the six compulsory
//! functions and two events of the token standard, then classifies the
//! file as not a token, a matched token, or an unmatched token. A function
//! participates only when it has a body ("complete implementation") and is
//! externally callable; `totalSupply` may alternatively be satisfied by a
//! public `uint256` state variable of that name.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::solfront::{ContractUnit, Visibility};

/// One member of the standard interface.
#[derive(Debug, Clone)]
pub struct StandardMember {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub returns: &'static [&'static str],
}

/// The six compulsory functions of the standard.
pub const STANDARD_FUNCTIONS: &[StandardMember] = &[
    StandardMember { name: "totalSupply", params: &[], returns: &["uint256"] },
    StandardMember { name: "balanceOf", params: &["address"], returns: &["uint256"] },
    StandardMember { name: "transfer", params: &["address", "uint256"], returns: &["bool"] },
    StandardMember { name: "transferFrom", params: &["address", "address", "uint256"], returns: &["bool"] },
    StandardMember { name: "approve", params: &["address", "uint256"], returns: &["bool"] },
    StandardMember { name: "allowance", params: &["address", "address"], returns: &["uint256"] },
];

/// The two standard events.
pub const STANDARD_EVENTS: &[StandardMember] = &[
    StandardMember { name: "Transfer", params: &["address", "address", "uint256"], returns: &[] },
    StandardMember { name: "Approval", params: &["address", "address", "uint256"], returns: &[] },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemberStatus {
    /// No callable implementation with this name exists.
    Absent,
    /// The name appears but the signature deviates from the standard.
    PresentUnmatched,
    /// Satisfied by a public `totalSupply` state variable.
    MatchedViaVariable,
    /// Signature matches the standard exactly.
    Matched,
}

impl MemberStatus {
    fn appeared(self) -> bool {
        self != MemberStatus::Absent
    }

    fn legal(self) -> bool {
        matches!(self, MemberStatus::Matched | MemberStatus::MatchedViaVariable)
    }
}

/// Counter state of one scanned source file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erc20Scan {
    pub appeared_func: u32,
    pub legal_func: u32,
    pub legal_event: u32,
    /// Status per standard member name (six functions, two events).
    pub per_member: BTreeMap<String, MemberStatus>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Erc20Verdict {
    NotErc20,
    Matched,
    Unmatched,
}

impl std::fmt::Display for Erc20Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Erc20Verdict::NotErc20 => write!(f, "NotErc20"),
            Erc20Verdict::Matched => write!(f, "Matched"),
            Erc20Verdict::Unmatched => write!(f, "Unmatched"),
        }
    }
}

/// Full per-file result: verdict plus the scan it was derived from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erc20Report {
    pub verdict: Erc20Verdict,
    pub scan: Erc20Scan,
}

fn callable(visibility: Visibility) -> bool {
    matches!(
        visibility,
        Visibility::Public | Visibility::External | Visibility::Default
    )
}

fn better(a: MemberStatus, b: MemberStatus) -> MemberStatus {
    a.max(b)
}

/// Scans all units of one source file. Members are unioned by name across
/// units; duplicates count once. Parameter names and mutability are
/// ignored; parameter and return types are compared in order after
/// canonicalization.
pub fn scan_interface(units: &[ContractUnit]) -> Erc20Scan {
    let mut per_member: BTreeMap<String, MemberStatus> = BTreeMap::new();
    for member in STANDARD_FUNCTIONS.iter().chain(STANDARD_EVENTS) {
        per_member.insert(member.name.to_owned(), MemberStatus::Absent);
    }

    for unit in units {
        for std_fn in STANDARD_FUNCTIONS {
            let slot = per_member.get_mut(std_fn.name).expect("prefilled");
            for f in &unit.functions {
                if f.name != std_fn.name || !f.has_body || !callable(f.visibility) {
                    continue;
                }
                let status = if f.param_types() == std_fn.params && f.return_types() == std_fn.returns
                {
                    MemberStatus::Matched
                } else {
                    MemberStatus::PresentUnmatched
                };
                *slot = better(*slot, status);
            }
        }
        // a public uint256 state variable stands in for totalSupply()
        if unit.state_vars.iter().any(|v| {
            v.name == "totalSupply" && v.type_name == "uint256" && v.visibility == Visibility::Public
        }) {
            let slot = per_member.get_mut("totalSupply").expect("prefilled");
            *slot = better(*slot, MemberStatus::MatchedViaVariable);
        }
        for std_ev in STANDARD_EVENTS {
            let slot = per_member.get_mut(std_ev.name).expect("prefilled");
            for e in &unit.events {
                if e.name != std_ev.name {
                    continue;
                }
                let types: Vec<&str> = e.params.iter().map(|p| p.type_name.as_str()).collect();
                let status = if types == std_ev.params {
                    MemberStatus::Matched
                } else {
                    MemberStatus::PresentUnmatched
                };
                *slot = better(*slot, status);
            }
        }
    }

    let appeared_func = STANDARD_FUNCTIONS
        .iter()
        .filter(|m| per_member[m.name].appeared())
        .count() as u32;
    let legal_func = STANDARD_FUNCTIONS
        .iter()
        .filter(|m| per_member[m.name].legal())
        .count() as u32;
    let legal_event = STANDARD_EVENTS
        .iter()
        .filter(|m| per_member[m.name].legal())
        .count() as u32;

    Erc20Scan {
        appeared_func,
        legal_func,
        legal_event,
        per_member,
    }
}

/// Applies the verdict rule: below five appearances the file is not a
/// token; a token matches only with six legal functions and both events.
pub fn classify_erc20(scan: &Erc20Scan) -> Erc20Verdict {
    if scan.appeared_func < 5 {
        Erc20Verdict::NotErc20
    } else if scan.legal_func == 6 && scan.legal_event == 2 {
        Erc20Verdict::Matched
    } else {
        Erc20Verdict::Unmatched
    }
}

/// Convenience wrapper: scan then classify.
pub fn check_units(units: &[ContractUnit]) -> Erc20Report {
    let scan = scan_interface(units);
    Erc20Report {
        verdict: classify_erc20(&scan),
        scan,
    }
}
