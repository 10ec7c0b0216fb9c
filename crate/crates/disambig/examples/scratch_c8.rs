use disambig::corpus::{self, generate, FamilyWeights, SynthConfig};
use disambig::eval::{self, Models};
use disambig::fixtures;
use disambig::frames::{extract_triples, Lemmas};
use disambig::grammar::Grammar;
use disambig::lenmodel::LenModel;
use disambig::lexmodel::LexModel;
use disambig::parser::parse;
use disambig::ranker::{RankerConfig, Strategy};

fn train_lex(tb: &corpus::Treebank, g: &Grammar) -> LexModel {
    let lemmas = Lemmas::identity();
    LexModel::fit(tb.trees().flat_map(|t| extract_triples(t, g, &lemmas)).map(|t| (t, 1)))
}

fn main() {
    let g = fixtures::grammar();
    let lemmas = Lemmas::identity();
    for (name, fw, det_prob) in [
        ("coord.4 pp.55 det0", FamilyWeights { simple: 0.05, pp: 0.55, coord: 0.4 }, 0.0),
        ("coord.4 pp.55 det0.15", FamilyWeights { simple: 0.05, pp: 0.55, coord: 0.4 }, 0.15),
        ("pp-only det0", FamilyWeights { simple: 0.0, pp: 1.0, coord: 0.0 }, 0.0),
    ] {
        let mut syn_avg = [0.0f64; 5];
        let mut rap_avg = [0.0f64; 5];
        let mut amb = 0usize;
        for s in 0..5u64 {
            let train = generate(&SynthConfig { seed: 600 + s, sentences: 4000, family_weights: fw, det_prob, ..Default::default() }, &g).unwrap();
            let len = LenModel::fit(train.trees(), &g).unwrap();
            let lex = train_lex(&train, &g);
            let test = generate(&SynthConfig { seed: 650 + s, sentences: 900, family_weights: fw, det_prob, ..Default::default() }, &g).unwrap();
            let ambiguous = corpus::Treebank {
                entries: test.entries.into_iter().filter(|e| parse(&g, &e.tokens).unwrap().count_parses() >= 3).collect(),
            };
            amb += ambiguous.len();
            let models = Models { lex: &lex, len: &len, pcfg: None, lemmas: &lemmas };
            let report = eval::compare_methods(&ambiguous, &[Strategy::SynOnly, Strategy::DetRap], &models, &g,
                &RankerConfig { seed: s, ..Default::default() }, Some(10_000), 5).unwrap();
            for m in &report.methods {
                let dst = if m.strategy == Strategy::SynOnly { &mut syn_avg } else { &mut rap_avg };
                for (n, acc) in m.accuracy.iter().enumerate() { dst[n] += acc / 5.0; }
            }
        }
        println!("{name} (avg ambiguous {}/seed)", amb / 5);
        println!("  avg syn: {:?}", syn_avg.map(|a| (a * 1000.0).round() / 1000.0));
        println!("  avg rap: {:?}", rap_avg.map(|a| (a * 1000.0).round() / 1000.0));
    }
}
