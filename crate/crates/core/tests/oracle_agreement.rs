use juxta_core::{
    build_grid, complement, count_series, juxtapose, reverse, Builtin, Direction, JuxtaRequest,
    Series, Side, Specification, TrackMode,
};
use juxta_oracle::{count_sequence, parse_cells};

fn agrees(spec: &Specification, cells: &str, n: usize) {
    let ours = count_series(spec, n).unwrap();
    let oracle = Series::from_u64s(&count_sequence(&parse_cells(cells).unwrap(), n).unwrap());
    assert_eq!(ours, oracle, "{cells}");
}

#[test]
fn builtins_count_their_classes() {
    for b in Builtin::ALL {
        agrees(&b.spec(), &format!("basis:{}", b.basis().join(",")), 8);
    }
}

#[test]
fn complement_of_av321_is_av123() {
    agrees(&complement(&Builtin::Av321.spec()), "basis:123", 8);
}

#[test]
fn reverse_of_av312_is_av213() {
    agrees(&reverse(&Builtin::Av312.spec()), "basis:213", 8);
}

#[test]
fn av312_juxtaposes_on_its_tracked_side() {
    let s = Builtin::Av312.spec();
    for direction in [Direction::Inc, Direction::Dec] {
        let req = JuxtaRequest {
            side: Side::Right,
            direction,
            track: TrackMode::RightOnly,
        };
        let cells = format!("basis:312 | {direction}");
        agrees(&juxtapose(&s, req).unwrap(), &cells, 8);
    }
}

#[test]
fn every_track_mode_counts_the_same_class() {
    let s = Builtin::Separable.spec();
    for track in [TrackMode::RightOnly, TrackMode::Both, TrackMode::None] {
        let req = JuxtaRequest {
            side: Side::Left,
            direction: Direction::Dec,
            track,
        };
        agrees(&juxtapose(&s, req).unwrap(), "dec | basis:2413,3142", 8);
    }
}

#[test]
fn grids_match_the_oracle() {
    let mono = Builtin::Monotone.spec();
    for pattern in ["core|dec", "dec|core|inc", "inc|core|dec|inc"] {
        let grid = build_grid(&mono, &pattern.parse().unwrap()).unwrap();
        let cells = pattern.replace("core", "inc");
        agrees(&grid, &cells, 8);
    }
    let av = Builtin::Av321.spec();
    let grid = build_grid(&av, &"dec|core|inc".parse().unwrap()).unwrap();
    agrees(&grid, "dec|basis:321|inc", 8);
}
