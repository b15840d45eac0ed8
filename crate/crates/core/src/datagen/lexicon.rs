//! Surface vocabulary for the synthetic corpora.

/// Subject noun phrases as (article, noun). Negation swaps the article for "no".
pub const SUBJECTS: &[(&str, &str)] = &[
    ("a", "man"),
    ("a", "woman"),
    ("a", "child"),
    ("a", "couple"),
    ("a", "boy"),
    ("a", "girl"),
    ("an", "old man"),
    ("a", "young woman"),
    ("a", "teenager"),
    ("a", "tourist"),
    ("a", "worker"),
    ("a", "student"),
];

/// A scene groups specific activities that all entail one general activity,
/// plus activities incompatible with every specific one.
pub struct Scene {
    pub general: &'static str,
    pub specific: &'static [&'static str],
    pub contrary: &'static [&'static str],
}

pub const SCENES: &[Scene] = &[
    Scene {
        general: "is playing music",
        specific: &["is playing a guitar on stage", "is playing the piano at a party", "is drumming in a garage"],
        contrary: &["is sleeping in a hammock", "is sitting in complete silence"],
    },
    Scene {
        general: "is cooking",
        specific: &["is frying eggs in a kitchen", "is grilling fish on a barbecue", "is baking bread in an oven"],
        contrary: &["is swimming across a lake", "is asleep on a sofa"],
    },
    Scene {
        general: "is outdoors",
        specific: &["is hiking up a mountain trail", "is fishing from a pier", "is jogging through a park"],
        contrary: &["is sitting inside a windowless office", "is lying in a hospital bed"],
    },
    Scene {
        general: "is reading",
        specific: &["is reading a newspaper on a bench", "is reading a novel in bed", "is studying a map"],
        contrary: &["is sleeping with eyes closed", "is wearing a blindfold"],
    },
    Scene {
        general: "is eating",
        specific: &["is eating a sandwich at a cafe", "is eating soup with a spoon", "is biting into an apple"],
        contrary: &["is fasting all day", "is singing into a microphone"],
    },
    Scene {
        general: "is riding something",
        specific: &["is riding a bicycle down a hill", "is riding a horse on a beach", "is riding a skateboard in a parking lot"],
        contrary: &["is standing still on the sidewalk", "is sitting on a couch"],
    },
    Scene {
        general: "is wearing a hat",
        specific: &["is wearing a red baseball cap", "is wearing a straw hat at the beach", "is wearing a wool beanie in the snow"],
        contrary: &["is bareheaded", "is getting a haircut in a barber chair"],
    },
    Scene {
        general: "is holding an animal",
        specific: &["is holding a puppy", "is holding a kitten on a porch", "is carrying a rabbit in both arms"],
        contrary: &["has both hands in pockets", "is juggling three balls"],
    },
    Scene {
        general: "is exercising",
        specific: &["is lifting weights at a gym", "is doing yoga on a mat", "is swimming laps in a pool"],
        contrary: &["is napping on a couch", "is lying motionless in bed"],
    },
    Scene {
        general: "is working",
        specific: &["is typing a report at a desk", "is repairing a car engine", "is painting a fence"],
        contrary: &["is on vacation at a resort", "is sleeping late"],
    },
    Scene {
        general: "is near water",
        specific: &["is swimming in the ocean", "is paddling a canoe on a river", "is walking along a beach"],
        contrary: &["is crossing a dry desert", "is climbing a snowy peak"],
    },
    Scene {
        general: "is talking",
        specific: &["is giving a speech to a crowd", "is chatting on the phone", "is telling a story to children"],
        contrary: &["is completely silent", "is sleeping soundly"],
    },
];

/// An attribute kind with its value inventory and question templates.
/// `{obj}` and `{val}` are substituted.
pub struct AttributeKind {
    pub name: &'static str,
    pub values: &'static [&'static str],
    pub open_question: &'static str,
    pub yes_no_question: &'static str,
}

pub const ATTRIBUTES: &[AttributeKind] = &[
    AttributeKind {
        name: "color",
        values: &[
            "brown", "pink", "red", "blue", "green", "white", "black", "yellow", "orange", "purple", "gray", "silver",
        ],
        open_question: "what color is {obj}?",
        yes_no_question: "is {obj} {val}?",
    },
    AttributeKind {
        name: "material",
        values: &["wood", "metal", "plastic", "glass", "leather", "cotton", "paper", "stone"],
        open_question: "what is {obj} made of?",
        yes_no_question: "is {obj} made of {val}?",
    },
    AttributeKind {
        name: "shape",
        values: &["round", "square", "rectangular", "triangular", "oval", "hexagonal"],
        open_question: "what shape is {obj}?",
        yes_no_question: "is {obj} {val}?",
    },
];

pub const OBJECTS: &[&str] = &[
    "desk", "chair", "car", "cup", "shirt", "ball", "lamp", "door", "bag", "hat", "bike", "book", "sofa", "vase",
    "table", "fence", "boat", "bottle", "kite", "phone", "clock", "pillow", "blanket", "umbrella", "bench", "box",
    "jacket", "shoe", "plate", "bowl", "truck", "bus", "toy", "towel", "rug", "curtain", "mug", "pen", "house", "sign",
];

pub fn attribute(name: &str) -> Option<&'static AttributeKind> {
    ATTRIBUTES.iter().find(|a| a.name == name)
}
