use kinam::fields::{parse_scalar, parse_scalar_at, parse_vector, Constants};
use kinam::Rational;

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

#[test]
fn symmetric_gauge_expression() {
    let mut consts = Constants::new();
    consts.insert("B".into(), r(1, 1));
    let a = parse_vector("(-B*y/2, B*x/2, 0)", &consts).unwrap();
    assert_eq!(
        a.curl().eval(&[r(3, 1), r(-2, 1), r(5, 7)]),
        [r(0, 1), r(0, 1), r(1, 1)]
    );
}

#[test]
fn decimals_are_exact() {
    let c = Constants::new();
    assert_eq!(parse_scalar("0.25", &c).unwrap().as_constant(), Some(r(1, 4)));
    assert_eq!(parse_scalar("2.5e-1", &c).unwrap().as_constant(), Some(r(1, 4)));
    assert_eq!(parse_scalar("1E2", &c).unwrap().as_constant(), Some(r(100, 1)));
}

#[test]
fn precedence_and_powers() {
    let c = Constants::new();
    let p = parse_scalar("-x^2 + 3*x*y - (y - 1)^2 / 4", &c).unwrap();
    let v = p.eval(&[r(2, 1), r(3, 1), r(0, 1)]);
    // −4 + 18 − 1
    assert_eq!(v, r(13, 1));
    // unary minus binds looser than ^
    assert_eq!(parse_scalar("-2^2", &c).unwrap().as_constant(), Some(r(-4, 1)));
}

#[test]
fn errors_report_position() {
    let c = Constants::new();
    let e = parse_scalar("x + q", &c).unwrap_err();
    assert_eq!((e.line, e.column), (1, 5));
    assert!(e.message.contains("unknown identifier"));

    let e = parse_scalar_at("x / y", &c, 7, 4).unwrap_err();
    assert_eq!((e.line, e.column), (7, 9));

    let e = parse_vector("(x, y)", &c).unwrap_err();
    assert!(e.message.contains("expected ','"));

    assert!(parse_scalar("1/0", &c).is_err());
    assert!(parse_scalar("x^", &c).is_err());
    assert!(parse_scalar("x y", &c).is_err());
    assert!(parse_scalar("", &c).is_err());
}
