use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::logic::Atom;
use crate::rng;

use super::lexicon::{SCENES, SUBJECTS};
use super::types::{Relation, SeedPair};

fn clause(subject: (&str, &str), verb_phrase: &str) -> (String, String) {
    let (article, noun) = subject;
    (format!("{article} {noun} {verb_phrase}"), format!("no {noun} {verb_phrase}"))
}

fn atom(id: &str, subject: (&str, &str), verb_phrase: &str) -> Atom {
    let (pos, neg) = clause(subject, verb_phrase);
    Atom::new(id, pos, neg).expect("lexicon templates are valid")
}

/// Draws a synthetic premise/hypothesis pair with the requested relation.
///
/// * entailment: the same subject doing a specific activity and the general
///   activity it implies;
/// * contradiction: the same subject doing a specific activity and an
///   incompatible one;
/// * neutral: two different subjects doing unrelated activities.
///
/// The result is certified by the oracle before it is returned.
pub fn gen_seed_pair(rng_seed: u64, relation: Relation) -> SeedPair {
    let mut rng = rng::stream(rng_seed, &[rng::tag("seed-pair"), relation as u64]);
    let subject = *SUBJECTS.choose(&mut rng).unwrap();
    let scene = SCENES.choose(&mut rng).unwrap();
    let specific = *scene.specific.choose(&mut rng).unwrap();

    let (premise, hypothesis) = match relation {
        Relation::Entailment => (atom("p", subject, specific), atom("h", subject, scene.general)),
        Relation::Contradiction => {
            let contrary = *scene.contrary.choose(&mut rng).unwrap();
            (atom("p", subject, specific), atom("h", subject, contrary))
        }
        Relation::Neutral => {
            let other_subject = loop {
                let s = *SUBJECTS.choose(&mut rng).unwrap();
                if s != subject {
                    break s;
                }
            };
            let offset = rng.gen_range(1..SCENES.len());
            let other_scene = &SCENES[(scene_index(scene) + offset) % SCENES.len()];
            let other = *other_scene.specific.choose(&mut rng).unwrap();
            (atom("p", subject, specific), atom("h", other_subject, other))
        }
    };
    let pair = SeedPair {
        premise,
        hypothesis,
        relation,
    };
    pair.certify().expect("seed pair certification");
    pair
}

fn scene_index(scene: &super::lexicon::Scene) -> usize {
    SCENES.iter().position(|s| std::ptr::eq(s, scene)).unwrap()
}
