use proptest::prelude::*;
use wbcc_core::{parse_table, Algebra};

fn table(max: usize) -> impl Strategy<Value = Algebra> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(0..n, n * n).prop_map(move |cells| {
            let rows: Vec<Vec<usize>> = cells.chunks(n).map(<[usize]>::to_vec).collect();
            Algebra::from_rows(&rows).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_identity(a in table(7)) {
        let back = parse_table(&a.to_bcc()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn named_and_labelled_tables_round_trip(a in table(5), name in "[a-z][a-z0-9_]{0,8}") {
        let labels: Vec<String> = a.elements().map(|x| format!("e{x}")).collect();
        let a = a.with_labels(labels).unwrap().with_name(name);
        prop_assert_eq!(parse_table(&a.to_bcc()).unwrap(), a);
    }

    #[test]
    fn right_power_unfolds_one_step(a in table(6), k in 0usize..7) {
        for x in a.elements() {
            for y in a.elements() {
                let next = a.right_power(x, y, k + 1).unwrap();
                prop_assert_eq!(next, a.mul(a.right_power(x, y, k).unwrap(), y));
            }
        }
    }

    #[test]
    fn product_is_total(a in table(8)) {
        let n = a.order();
        for x in 0..n {
            for y in 0..n {
                prop_assert!(a.product(x, y).unwrap() < n);
            }
        }
        prop_assert!(a.product(n, 0).is_err());
        prop_assert!(a.product(0, n).is_err());
    }
}

#[test]
fn comments_and_blank_lines_are_ignored() {
    let text = "# a comment\nbcc v1\n\nn=2\n0 0   # trailing\n1 0\n";
    let a = parse_table(text).unwrap();
    assert_eq!(a.rows(), vec![vec![0, 0], vec![1, 0]]);
}
