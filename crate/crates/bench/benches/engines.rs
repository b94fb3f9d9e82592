use std::hint::black_box;

use beldef::altorders::StratifiedBase;
use beldef::oracle;
use beldef::zcore::{self, ZModel};
use beldef::LcdModel;
use beldef_bench::{fixture, samples};
use criterion::{criterion_group, criterion_main, Criterion};

const FIXTURES: [&str; 5] = ["penguin.kb", "legs.kb", "wings.kb", "quaker2.kb", "ecologist.kb"];

fn stratification(c: &mut Criterion) {
    let mut group = c.benchmark_group("stratify");
    for name in FIXTURES {
        let kb = fixture(name);
        group.bench_function(name, |b| {
            b.iter(|| zcore::stratify(black_box(&kb.base), kb.vocab.len()))
        });
    }
    let suite = samples(1, 50, 4, 5);
    group.bench_function("random-50", |b| {
        b.iter(|| {
            for s in &suite {
                black_box(zcore::stratify(&s.base, s.atoms));
            }
        })
    });
    group.finish();
}

fn lcd_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("lcd-build");
    for name in FIXTURES {
        let kb = fixture(name);
        group.bench_function(name, |b| {
            b.iter(|| LcdModel::build(black_box(&kb.base), kb.vocab.len()).unwrap())
        });
    }
    let suite = samples(2, 20, 4, 5);
    group.sample_size(20);
    group.bench_function("random-20", |b| {
        b.iter(|| {
            for s in &suite {
                black_box(LcdModel::build(&s.base, s.atoms).unwrap());
            }
        })
    });
    group.finish();
}

fn queries(c: &mut Criterion) {
    let mut kb = fixture("wings.kb");
    let alpha = kb.parse_formula("b & p & m").unwrap();
    let beta = kb.parse_formula("!f").unwrap();
    let atoms = kb.vocab.len();
    let z = ZModel::new(&kb.base, atoms).unwrap();
    let lcd = LcdModel::build(&kb.base, atoms).unwrap();
    let ordered = StratifiedBase::new(&kb.base, atoms).unwrap();

    let mut group = c.benchmark_group("query-wings");
    group.bench_function("p", |b| {
        b.iter(|| zcore::entails_p(&kb.base, atoms, black_box(&alpha), &beta).unwrap())
    });
    group.bench_function("z", |b| b.iter(|| z.entails(black_box(&alpha), &beta).unwrap()));
    group.bench_function("lcd", |b| b.iter(|| lcd.query(black_box(&alpha), &beta).unwrap()));
    group.bench_function("penalty", |b| {
        b.iter(|| ordered.entails_penalty(black_box(&alpha), &beta).unwrap())
    });
    group.bench_function("lex", |b| b.iter(|| ordered.entails_lex(black_box(&alpha), &beta).unwrap()));
    group.bench_function("brewka", |b| {
        b.iter(|| ordered.entails_brewka(black_box(&alpha), &beta).unwrap())
    });
    group.finish();
}

fn numeric_oracle(c: &mut Criterion) {
    let ladder = oracle::decimal_ladder(&[2, 4, 6]);
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    for name in ["penguin.kb", "legs.kb"] {
        let kb = fixture(name);
        let model = LcdModel::build(&kb.base, kb.vocab.len()).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| oracle::run(&kb.base, black_box(&model), &ladder).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, stratification, lcd_build, queries, numeric_oracle);
criterion_main!(benches);
