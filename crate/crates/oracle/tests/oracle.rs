use juxta_oracle::{
    avoids_cell, contains, count_class, count_sequence, greedy_cut, greedy_unique, juxt_membership,
    parse_cells, CellSpec, OracleError, Perm, MAX_LEN,
};
use proptest::prelude::*;

fn perm(max: usize) -> impl Strategy<Value = Perm> {
    (0..=max)
        .prop_flat_map(|n| Just((1..=n as u8).collect::<Vec<u8>>()).prop_shuffle())
        .prop_map(|v| Perm::new(v).unwrap())
}

fn rc(p: &Perm) -> Perm {
    p.reverse().complement()
}

fn rc_cell(c: &CellSpec) -> CellSpec {
    match c {
        CellSpec::Basis(b) => CellSpec::Basis(b.iter().map(rc).collect()),
        other => other.clone(),
    }
}

#[test]
fn counts_of_small_classes() {
    assert_eq!(count_class(&[CellSpec::Inc, CellSpec::Inc], 4).unwrap(), 12);
    assert_eq!(
        count_class(&parse_cells("basis:321").unwrap(), 5).unwrap(),
        42
    );
    assert_eq!(
        count_class(&parse_cells("basis:2413,3142 | inc").unwrap(), 5).unwrap(),
        115
    );
    assert_eq!(
        count_sequence(&parse_cells("basis:2413,3142").unwrap(), 7).unwrap(),
        vec![1, 1, 2, 6, 22, 90, 394, 1806]
    );
}

#[test]
fn two_increasing_cells_give_two_to_the_n_minus_n() {
    let cells = parse_cells("inc|inc").unwrap();
    for n in 1..=8 {
        assert_eq!(count_class(&cells, n).unwrap(), (1u64 << n) - n as u64);
    }
}

#[test]
fn greedy_cut_examples() {
    assert_eq!(greedy_cut(&"2413".parse().unwrap()), 2);
    assert_eq!(greedy_cut(&"12345".parse().unwrap()), 0);
    assert_eq!(greedy_cut(&"54321".parse().unwrap()), 4);
}

#[test]
fn greedy_uniqueness_for_small_cores() {
    for core in ["basis:321", "basis:2413,3142", "basis:312"] {
        let core: CellSpec = core.parse().unwrap();
        for n in 0..=7 {
            assert!(greedy_unique(&core, n).unwrap(), "{core} at {n}");
        }
    }
    let empty = CellSpec::basis(&["e"]).unwrap();
    assert!(greedy_unique(&empty, 5).unwrap());
    assert_eq!(count_class(&[empty], 3).unwrap(), 0);
}

#[test]
fn size_limit_is_enforced() {
    assert!(matches!(
        count_class(&[CellSpec::Inc], MAX_LEN + 1),
        Err(OracleError::SizeLimit { .. })
    ));
}

#[test]
fn malformed_cells_are_rejected() {
    assert!(parse_cells("inc | up").is_err());
    assert!(parse_cells("basis:1223").is_err());
    assert!(parse_cells("basis:").is_err());
}

proptest! {
    #[test]
    fn display_round_trips(p in perm(9)) {
        prop_assert_eq!(p.to_string().parse::<Perm>().unwrap(), p);
    }

    #[test]
    fn containment_respects_symmetries(p in perm(4), q in perm(8)) {
        let c = contains(&p, &q);
        prop_assert_eq!(contains(&p.reverse(), &q.reverse()), c);
        prop_assert_eq!(contains(&p.complement(), &q.complement()), c);
    }

    #[test]
    fn juxtaposition_reverse_complement(q in perm(8), which in 0usize..3) {
        let core = ["basis:321", "basis:2413,3142", "basis:312,4321"][which];
        let core: CellSpec = core.parse().unwrap();
        let right = [core.clone(), CellSpec::Inc];
        let left = [CellSpec::Inc, rc_cell(&core)];
        prop_assert_eq!(juxt_membership(&q, &right), juxt_membership(&rc(&q), &left));
    }

    #[test]
    fn greedy_cut_is_the_longest_increasing_suffix(q in perm(9)) {
        let i = greedy_cut(&q);
        let v = q.values();
        prop_assert!(v[i..].windows(2).all(|w| w[0] < w[1]));
        prop_assert!(i == 0 || v[i - 1] > v[i]);
    }

    #[test]
    fn single_cells_match_avoidance(q in perm(8)) {
        let cell: CellSpec = "basis:231".parse().unwrap();
        prop_assert_eq!(juxt_membership(&q, std::slice::from_ref(&cell)), avoids_cell(&q, &cell));
    }
}
