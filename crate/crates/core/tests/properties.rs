use majqca::cellsim::{
    build_inverter, build_maj3, build_maj5, build_wire, polarization_4dot, polarization_8dot, relax,
    ChargeState4, ChargeState8, CellGrid, Polarity,
};
use majqca::cost::cost;
use majqca::network::{majority, NetworkBuilder};
use majqca::parse::{parse_expr, to_expr};
use majqca::truth_table::{MintermSet, TruthTable};
use proptest::prelude::*;

const ABC: [&str; 3] = ["A", "B", "C"];

fn maj3(a: bool, b: bool, c: bool) -> bool {
    let mut nb = NetworkBuilder::new(3);
    let (x, y, z) = (nb.input(0), nb.input(1), nb.input(2));
    let m = nb.maj3(x, y, z);
    nb.build(m).unwrap().evaluate(&[a, b, c]).unwrap()
}

fn maj5(v: [bool; 5]) -> bool {
    let mut nb = NetworkBuilder::new(5);
    let ins = [0, 1, 2, 3, 4].map(|i| nb.input(i));
    let m = nb.maj5(ins);
    nb.build(m).unwrap().evaluate(&v).unwrap()
}

fn bits5(k: u32) -> [bool; 5] {
    [0, 1, 2, 3, 4].map(|i| k >> (4 - i) & 1 == 1)
}

#[test]
fn maj5_matches_ten_term_sop() {
    for k in 0..32 {
        let [a, b, c, d, e] = bits5(k);
        let sop = (a && b && c)
            || (a && b && d)
            || (a && b && e)
            || (a && c && d)
            || (a && c && e)
            || (a && d && e)
            || (b && c && d)
            || (b && c && e)
            || (b && d && e)
            || (c && d && e);
        assert_eq!(maj5([a, b, c, d, e]), sop, "row {k}");
    }
}

#[test]
fn and_or_identities() {
    for k in 0..8u32 {
        let [a, b, c] = [k & 4 != 0, k & 2 != 0, k & 1 != 0];
        let net = |e: &str| parse_expr(e, &ABC).unwrap().evaluate(&[a, b, c]).unwrap();
        assert_eq!(net("M(A,B,0)"), a && b);
        assert_eq!(net("M(A,B,1)"), a || b);
        assert_eq!(net("M5(A,B,C,0,0)"), a && b && c);
        assert_eq!(net("M5(A,B,C,1,1)"), a || b || c);
    }
}

proptest! {
    #[test]
    fn majority_ignores_input_order(
        k in 0u32..32,
        perm5 in Just([0usize, 1, 2, 3, 4]).prop_shuffle(),
        perm3 in Just([0usize, 1, 2]).prop_shuffle(),
    ) {
        let v = bits5(k);
        prop_assert_eq!(maj5(v), maj5(perm5.map(|i| v[i])));
        let p = perm3.map(|i| v[i]);
        prop_assert_eq!(maj3(v[0], v[1], v[2]), maj3(p[0], p[1], p[2]));
        prop_assert_eq!(maj3(v[0], v[1], v[2]), majority(v[..3].iter().copied()));
    }

    #[test]
    fn majority_is_self_dual(k in 0u32..32) {
        let v = bits5(k);
        prop_assert_eq!(!maj5(v), maj5(v.map(|b| !b)));
        prop_assert_eq!(!maj3(v[0], v[1], v[2]), maj3(!v[0], !v[1], !v[2]));
    }

    #[test]
    fn double_negation(e in expr_strategy()) {
        let net = parse_expr(&e, &ABC).unwrap();
        let twice = parse_expr(&format!("{e}''"), &ABC).unwrap();
        prop_assert_eq!(net.truth_table().unwrap(), twice.truth_table().unwrap());
    }

    #[test]
    fn print_parse_round_trip(e in expr_strategy()) {
        let net = parse_expr(&e, &ABC).unwrap();
        let text = to_expr(&net, &ABC);
        let back = parse_expr(&text, &ABC).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(to_expr(&back, &ABC), text);
    }

    #[test]
    fn cost_ignores_operand_order(
        ops in proptest::collection::vec(expr_strategy(), 5),
        perm in Just([0usize, 1, 2, 3, 4]).prop_shuffle(),
    ) {
        let a = format!("M5({})", ops.join(","));
        let b = format!("M5({})", perm.map(|i| ops[i].as_str()).join(","));
        let (na, nb) = (parse_expr(&a, &ABC).unwrap(), parse_expr(&b, &ABC).unwrap());
        prop_assert_eq!(cost(&na), cost(&nb));
        prop_assert_eq!(na.truth_table().unwrap(), nb.truth_table().unwrap());
    }

    #[test]
    fn truth_table_round_trip(n in 1usize..=8, seed in any::<u64>()) {
        let rows = 1usize << n;
        let ms: Vec<usize> = (0..rows).filter(|i| (seed.rotate_left(*i as u32 % 64) ^ (*i as u64 * 0x9e37)) & 1 == 1).collect();
        let tt = TruthTable::from_minterms(n, ms.iter().copied()).unwrap();
        let text = tt.to_string();
        let parsed: MintermSet = text.parse().unwrap();
        prop_assert_eq!(parsed.to_table(n).unwrap(), tt.clone());
        prop_assert_eq!(tt.minterms().into_iter().collect::<Vec<_>>(), ms);
    }

    #[test]
    fn charge_scaling_invariance(q in proptest::array::uniform8(0.0f64..10.0), s in 0.01f64..100.0) {
        prop_assume!(q.iter().sum::<f64>() > 1e-6);
        let q4 = [q[0], q[1], q[2], q[3]];
        let p = polarization_4dot(&ChargeState4(q4)).unwrap();
        let ps = polarization_4dot(&ChargeState4(q4.map(|x| x * s))).unwrap();
        prop_assert!((p - ps).abs() < 1e-12);
        prop_assert!(p.abs() <= 1.0);
        let p = polarization_8dot(&ChargeState8(q)).unwrap();
        let ps = polarization_8dot(&ChargeState8(q.map(|x| x * s))).unwrap();
        prop_assert!((p - ps).abs() < 1e-12);
        prop_assert!(p.abs() <= 1.0);
    }

    #[test]
    fn relaxation_is_odd_and_bounded(which in 0usize..4, bits in 0u32..32, len in 2usize..=10) {
        let pol = |i: u32| Polarity::from(bits >> i & 1 == 1);
        let build = |flip: bool| -> CellGrid {
            let p = |i| if flip { pol(i).flip() } else { pol(i) };
            match which {
                0 => build_wire(len, p(0)).unwrap(),
                1 => build_inverter(p(0)),
                2 => build_maj3([p(0), p(1), p(2)]),
                _ => build_maj5([p(0), p(1), p(2), p(3), p(4)]),
            }
        };
        let (mut g, mut h) = (build(false), build(true));
        let r = relax(&mut g, 1e-6, 1000).unwrap();
        let s = relax(&mut h, 1e-6, 1000).unwrap();
        prop_assert_eq!(r.sweeps, s.sweeps);
        for (a, b) in r.polarizations.iter().zip(&s.polarizations) {
            prop_assert!((a + b).abs() < 1e-9);
            prop_assert!(a.abs() <= 1.0);
        }
        let mut again = build(false);
        prop_assert_eq!(relax(&mut again, 1e-6, 1000).unwrap(), r);
    }
}

fn expr_strategy() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("A".to_string()),
        Just("B".to_string()),
        Just("C".to_string()),
        Just("0".to_string()),
        Just("1".to_string()),
    ];
    leaf.prop_recursive(3, 24, 5, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| format!("{e}'")),
            proptest::collection::vec(inner.clone(), 3).prop_map(|v| format!("M({})", v.join(","))),
            proptest::collection::vec(inner, 5).prop_map(|v| format!("M5({})", v.join(","))),
        ]
    })
}
