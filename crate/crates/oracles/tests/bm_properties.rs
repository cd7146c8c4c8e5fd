use vanishing::bm::run_abbott;
use vanishing::{bm, normal_form, Field, OrderSpec, PointSet, Polynomial, Variant};
use vanishing_oracles::{check_result, corpus, groebner_size_bound, Instance, Sample, Visitor};

struct Agreement;

impl Visitor for Agreement {
    fn visit<F: Sample>(&mut self, inst: &Instance, points: &PointSet<F>) -> Result<(), String> {
        let mmm = bm(points, &inst.order, Variant::Mmm).map_err(|e| e.to_string())?;
        let abbott = bm(points, &inst.order, Variant::Abbott).map_err(|e| e.to_string())?;
        if mmm != abbott {
            return Err("variants disagree".into());
        }
        check_result(points, &inst.order, &mmm)?;
        let bound = groebner_size_bound(inst.n, inst.m);
        if mmm.groebner.len() > bound {
            return Err(format!("|G| = {} exceeds {bound}", mmm.groebner.len()));
        }
        // Every candidate adds at most n entries to L per basis element.
        if mmm.stats.l_max > inst.n * inst.m + 1 {
            return Err(format!("|L| reached {}", mmm.stats.l_max));
        }
        let calls = (mmm.groebner.len() + mmm.basis.len()) as u64;
        if mmm.stats.functional_calls != calls || abbott.stats.functional_calls != calls {
            return Err("evaluation count differs from |G| + |B|".into());
        }
        Ok(())
    }
}

#[test]
fn variants_agree_on_seeded_corpus() {
    for inst in corpus(1, 220, 10, 30) {
        inst.run(&mut Agreement).unwrap();
    }
}

#[test]
fn abbott_list_never_holds_multiples() {
    // The scanning variant keeps L free of divisibility relations, so its
    // list is never longer than the merging one.
    for inst in corpus(2, 30, 6, 12) {
        struct Lengths;
        impl Visitor for Lengths {
            fn visit<F: Sample>(&mut self, inst: &Instance, p: &PointSet<F>) -> Result<(), String> {
                let sys = vanishing::PointEvaluation::from_points(p);
                let a = run_abbott(&sys, &inst.order).map_err(|e| e.to_string())?;
                let m = bm(p, &inst.order, Variant::Mmm).map_err(|e| e.to_string())?;
                (a.stats.l_max <= m.stats.l_max)
                    .then_some(())
                    .ok_or_else(|| format!("{} > {}", a.stats.l_max, m.stats.l_max))
            }
        }
        inst.run(&mut Lengths).unwrap();
    }
}

struct NormalForms;

impl Visitor for NormalForms {
    fn visit<F: Sample>(&mut self, inst: &Instance, points: &PointSet<F>) -> Result<(), String> {
        use rand::SeedableRng;
        let field = points.field();
        let o = &inst.order;
        let r = bm(points, o, Variant::Mmm).map_err(|e| e.to_string())?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(inst.seed);
        let random_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
            use rand::Rng;
            let terms = (0..4)
                .map(|_| {
                    let e: Vec<u32> = (0..inst.n).map(|_| rng.gen_range(0..3)).collect();
                    (field.sample(rng, false), vanishing::Monomial::new(e).unwrap())
                })
                .collect();
            Polynomial::from_terms(field, o, terms)
        };
        let f = random_poly(&mut rng);
        let g = random_poly(&mut rng);
        let nf = |p: &Polynomial<F::Elem>| normal_form(p, &r, points, o).map_err(|e| e.to_string());
        let (nf_f, nf_g) = (nf(&f)?, nf(&g)?);
        if nf(&nf_f)? != nf_f {
            return Err("normal form is not idempotent".into());
        }
        if nf(&f.add(field, o, &g))? != nf_f.add(field, o, &nf_g) {
            return Err("normal form is not additive".into());
        }
        for p in points.points() {
            if f.evaluate(field, p) != nf_f.evaluate(field, p) {
                return Err("normal form changes values".into());
            }
        }
        if nf_f.monomials().any(|t| !r.basis.contains(t)) {
            return Err("normal form leaves B".into());
        }
        let _ = field.one();
        Ok(())
    }
}

#[test]
fn normal_form_is_linear_and_idempotent() {
    for inst in corpus(3, 40, 5, 10) {
        inst.run(&mut NormalForms).unwrap();
    }
}

#[test]
fn worked_example_passes_invariant_suite() {
    let f = vanishing::Rationals;
    let rows: [[i64; 5]; 4] = [[1, 1, 0, 1, 0], [2, 2, 1, 1, 1], [2, 0, 1, 1, -1], [5, 3, 4, 1, 2]];
    let p = PointSet::new(
        f,
        5,
        rows.iter()
            .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
            .collect(),
    )
    .unwrap();
    for o in [OrderSpec::lex(5), OrderSpec::deglex(5), OrderSpec::degrevlex(5)] {
        let r = bm(&p, &o, Variant::Mmm).unwrap();
        check_result(&p, &o, &r).unwrap();
        assert_eq!(r, bm(&p, &o, Variant::Abbott).unwrap());
    }
}
