use kinam::Grid;

#[test]
fn rejects_bad_grids() {
    assert!(Grid::centered(&[7, 8], 0.1).is_err());
    assert!(Grid::centered(&[8, 8], 0.0).is_err());
    assert!(Grid::centered(&[], 0.1).is_err());
    assert!(Grid::centered(&[8, 8, 8, 8], 0.1).is_err());
}

#[test]
fn indexing_round_trips() {
    let g = Grid::centered(&[8, 9, 10], 0.5).unwrap();
    assert_eq!(g.len(), 720);
    for flat in [0, 1, 8, 77, 719] {
        assert_eq!(g.flat_index(g.multi_index(flat)), flat);
    }
    assert_eq!(g.stride(2), 72);
}

#[test]
fn centered_grid_is_symmetric() {
    let g = Grid::centered(&[8, 8], 0.25).unwrap();
    let first = g.coordinate(0);
    let last = g.coordinate(g.len() - 1);
    assert!((first[0] + last[0]).abs() < 1e-15);
    assert!((first[1] + last[1]).abs() < 1e-15);
    assert_eq!(first[2], 0.0);
    let (lo, hi) = g.ghost_planes(0);
    assert!((lo + 1.125).abs() < 1e-15 && (hi - 1.125).abs() < 1e-15);
    assert_eq!(g.cell_volume(), 0.0625);
}

#[test]
fn point_count_is_product() {
    let g = Grid::centered(&[12, 8], 0.1).unwrap();
    assert_eq!(g.len(), 96);
    assert_eq!(g.shape(), [12, 8, 1]);
}
