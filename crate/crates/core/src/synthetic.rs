//! Deterministic synthetic picture-description corpora.
//!
//! Real screening transcripts are access-restricted clinical data, so the
//! shipped fixtures, demos, and end-to-end tests run on generated CHAT files
//! instead. Both classes describe the same kitchen scene from a shared
//! vocabulary; each class additionally injects its own marker vocabulary at
//! a configured token rate (20% by default). Shared words carry no class
//! signal, so separability comes from marker-bearing skip-grams. Generation
//! is a pure function of the config: one seed reproduces every file byte
//! for byte.

use std::io;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::{CorpusManifest, Label, ManifestEntry, SplitRole};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub train_mci: usize,
    pub train_control: usize,
    pub validation_mci: usize,
    pub validation_control: usize,
    /// Target share of participant tokens drawn from the class marker
    /// vocabulary.
    pub marker_rate: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            train_mci: 19,
            train_control: 19,
            validation_mci: 8,
            validation_control: 8,
            marker_rate: 0.20,
            seed: 7,
        }
    }
}

/// One file of a generated corpus. `relative_path` uses `/` separators and
/// is interpreted against the directory the corpus is written to.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedFile {
    pub relative_path: String,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub files: Vec<GeneratedFile>,
}

impl SyntheticCorpus {
    pub fn write(&self, dir: &Path) -> io::Result<()> {
        for file in &self.files {
            let path = dir.join(&file.relative_path);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, &file.content)?;
        }
        Ok(())
    }

    pub fn file(&self, relative_path: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|f| f.relative_path == relative_path)
            .map(|f| f.content.as_str())
    }
}

/// A vocabulary entry: the spoken word and its `%mor` tier item.
type W = (&'static str, &'static str);

const NOUNS: &[W] = &[
    ("boy", "n|boy"),
    ("water", "n|water"),
    ("mother", "n|mother"),
    ("cookie", "n|cookie"),
    ("sink", "n|sink"),
    ("girl", "n|girl"),
    ("jar", "n|jar"),
    ("stool", "n|stool"),
    ("window", "n|window"),
    ("kitchen", "n|kitchen"),
    ("dish", "n|dish"),
    ("plate", "n|plate"),
    ("curtain", "n|curtain"),
    ("counter", "n|counter"),
    ("floor", "n|floor"),
    ("cup", "n|cup"),
];

const VERBS: &[W] = &[
    ("taking", "part|take-PRESP"),
    ("falling", "part|fall-PRESP"),
    ("washing", "part|wash-PRESP"),
    ("reaching", "part|reach-PRESP"),
    ("standing", "part|stand-PRESP"),
    ("spilling", "part|spill-PRESP"),
    ("drying", "part|dry-PRESP"),
    ("looking", "part|look-PRESP"),
    ("getting", "part|get-PRESP"),
    ("slipping", "part|slip-PRESP"),
];

const MODS: &[W] = &[
    ("little", "adj|little"),
    ("big", "adj|big"),
    ("other", "adj|other"),
    ("wet", "adj|wet"),
    ("full", "adj|full"),
    ("open", "adj|open"),
];

struct MarkerBank {
    nouns: &'static [W],
    verbs: &'static [W],
    mods: &'static [W],
}

const MCI_MARKERS: MarkerBank = MarkerBank {
    nouns: &[
        ("thing", "n|thing"),
        ("stuff", "n|stuff"),
        ("something", "pro:indef|something"),
        ("whatsit", "n|whatsit"),
        ("place", "n|place"),
        ("bit", "n|bit"),
    ],
    verbs: &[
        ("forgetting", "part|forget-PRESP"),
        ("guessing", "part|guess-PRESP"),
        ("wondering", "part|wonder-PRESP"),
        ("losing", "part|lose-PRESP"),
    ],
    mods: &[("hard", "adj|hard"), ("strange", "adj|strange")],
};

const CONTROL_MARKERS: MarkerBank = MarkerBank {
    nouns: &[
        ("faucet", "n|faucet"),
        ("cupboard", "n|cupboard"),
        ("apron", "n|apron"),
        ("saucer", "n|saucer"),
        ("puddle", "n|puddle"),
        ("lawn", "n|lawn"),
    ],
    verbs: &[
        ("overflowing", "part|overflow-PRESP"),
        ("splashing", "part|splash-PRESP"),
        ("wobbling", "part|wobble-PRESP"),
        ("teetering", "part|teeter-PRESP"),
    ],
    mods: &[("oblivious", "adj|oblivious"), ("soaked", "adj|soaked")],
};

/// Stock multi-word chunks. Repeating whole chunks gives each class a few
/// high-document-frequency skip-grams, the kind a decision tree can split on.
const MCI_PHRASES: &[&[W]] = &[
    &[
        ("i", "pro|i"),
        ("forget", "v|forget"),
        ("the", "det|the"),
        ("word", "n|word"),
    ],
    &[
        ("some", "qn|some"),
        ("kind", "n|kind"),
        ("of", "prep|of"),
        ("cookie", "n|cookie"),
    ],
    &[
        ("something", "pro:indef|something"),
        ("like", "prep|like"),
        ("that", "pro:dem|that"),
    ],
    &[
        ("you", "pro|you"),
        ("know", "v|know"),
        ("what", "pro:int|what"),
        ("i", "pro|i"),
        ("mean", "v|mean"),
    ],
];

const CONTROL_PHRASES: &[&[W]] = &[
    &[
        ("the", "det|the"),
        ("water", "n|water"),
        ("is", "cop|be&3S"),
        ("overflowing", "part|overflow-PRESP"),
    ],
    &[
        ("the", "det|the"),
        ("faucet", "n|faucet"),
        ("is", "cop|be&3S"),
        ("splashing", "part|splash-PRESP"),
    ],
    &[
        ("a", "det|a"),
        ("puddle", "n|puddle"),
        ("on", "prep|on"),
        ("the", "det|the"),
        ("lawn", "n|lawn"),
    ],
    &[
        ("the", "det|the"),
        ("saucer", "n|saucer"),
        ("is", "cop|be&3S"),
        ("soaked", "adj|soaked"),
    ],
];

/// Words that occur only in MCI transcripts (marker bank plus phrase-only
/// words). Everything else is shared scene vocabulary.
pub const MCI_EXCLUSIVE: &[&str] = &[
    "thing",
    "stuff",
    "something",
    "whatsit",
    "place",
    "bit",
    "forgetting",
    "guessing",
    "wondering",
    "losing",
    "hard",
    "strange",
    "forget",
    "word",
    "some",
    "kind",
    "you",
    "know",
    "what",
    "mean",
];

/// Words that occur only in control transcripts.
pub const CONTROL_EXCLUSIVE: &[&str] = &[
    "faucet",
    "cupboard",
    "apron",
    "saucer",
    "puddle",
    "lawn",
    "overflowing",
    "splashing",
    "wobbling",
    "teetering",
    "oblivious",
    "soaked",
];

enum Slot {
    L(&'static str, &'static str),
    N,
    V,
    M,
}

use Slot::{L, M, N, V};

const TEMPLATES: &[&[Slot]] = &[
    &[L("the", "det|the"), N, L("is", "cop|be&3S"), V],
    &[
        L("the", "det|the"),
        N,
        L("is", "cop|be&3S"),
        V,
        L("the", "det|the"),
        N,
    ],
    &[
        L("and", "coord|and"),
        L("the", "det|the"),
        N,
        L("is", "cop|be&3S"),
        V,
        L("in", "prep|in"),
        L("the", "det|the"),
        N,
    ],
    &[
        L("there", "adv|there"),
        L("is", "cop|be&3S"),
        L("a", "det|a"),
        N,
        L("on", "prep|on"),
        L("the", "det|the"),
        N,
    ],
    &[
        L("he", "pro|he"),
        L("is", "cop|be&3S"),
        V,
        L("the", "det|the"),
        M,
        N,
    ],
    &[
        L("she", "pro|she"),
        L("is", "cop|be&3S"),
        V,
        L("a", "det|a"),
        N,
        L("for", "prep|for"),
        L("the", "det|the"),
        N,
    ],
    &[L("the", "det|the"), M, N, L("is", "cop|be&3S"), V],
    &[
        L("i", "pro|i"),
        L("see", "v|see"),
        L("a", "det|a"),
        N,
        L("and", "coord|and"),
        L("a", "det|a"),
        N,
    ],
    &[
        L("the", "det|the"),
        N,
        L("and", "coord|and"),
        L("the", "det|the"),
        N,
        L("are", "cop|be&PRES"),
        V,
    ],
    &[
        L("it", "pro|it"),
        L("looks", "cop|look-3S"),
        L("like", "prep|like"),
        L("the", "det|the"),
        N,
        L("is", "cop|be&3S"),
        V,
    ],
    &[
        L("i", "pro|i"),
        L("think", "v|think"),
        L("that", "comp|that"),
        L("the", "det|the"),
        N,
        L("is", "cop|be&3S"),
        V,
    ],
];

struct ClassStyle {
    markers: &'static MarkerBank,
    phrases: &'static [&'static [W]],
    filler_rate: f64,
    pause_rate: f64,
    retrace_rate: f64,
}

fn style(label: Label) -> ClassStyle {
    match label {
        Label::Mci => ClassStyle {
            markers: &MCI_MARKERS,
            phrases: MCI_PHRASES,
            filler_rate: 0.14,
            pause_rate: 0.12,
            retrace_rate: 0.07,
        },
        Label::Control => ClassStyle {
            markers: &CONTROL_MARKERS,
            phrases: CONTROL_PHRASES,
            filler_rate: 0.05,
            pause_rate: 0.06,
            retrace_rate: 0.02,
        },
    }
}

const PHRASE_RATE: f64 = 0.35;
/// Content slots draw from the marker bank more often than the target token
/// rate because templates are mostly function words.
const INJECTION_BOOST: f64 = 1.55;
const FILLERS: [&str; 2] = ["&uh", "&um"];
const XXX_RATE: f64 = 0.03;

/// Rank-skewed draw: earlier entries come up more often, the way a handful
/// of common words dominates real speech.
fn pick(rng: &mut ChaCha8Rng, bank: &[W]) -> W {
    let u: f64 = rng.gen();
    let idx = ((u * u) * bank.len() as f64) as usize;
    bank[idx.min(bank.len() - 1)]
}

fn utterance_tokens(rng: &mut ChaCha8Rng, style: &ClassStyle, inject: f64) -> Vec<W> {
    if rng.gen::<f64>() < PHRASE_RATE {
        let phrase = style.phrases[rng.gen_range(0..style.phrases.len())];
        let mut out: Vec<W> = Vec::new();
        match rng.gen_range(0..3) {
            0 => out.push(("and", "coord|and")),
            1 => out.push(("well", "co|well")),
            _ => {}
        }
        out.extend_from_slice(phrase);
        return out;
    }
    let template = TEMPLATES[rng.gen_range(0..TEMPLATES.len())];
    template
        .iter()
        .map(|slot| {
            let (bank, markers) = match slot {
                L(w, m) => return (*w, *m),
                N => (NOUNS, style.markers.nouns),
                V => (VERBS, style.markers.verbs),
                M => (MODS, style.markers.mods),
            };
            if rng.gen::<f64>() < inject {
                pick(rng, markers)
            } else {
                pick(rng, bank)
            }
        })
        .collect()
}

/// Renders one participant turn, plus its `%mor` line when requested. The
/// mor items follow the clean tokens exactly; noise (fillers, pauses,
/// retraces, `xxx`, bullets) is inserted only in forms the cleaner strips.
fn render_par(
    rng: &mut ChaCha8Rng,
    tokens: &[W],
    style: &ClassStyle,
    clock_ms: &mut u64,
    timing: bool,
    with_mor: bool,
) -> String {
    let mut pieces: Vec<String> = Vec::new();
    let mut pauses: u64 = 0;
    for (i, (w, _)) in tokens.iter().enumerate() {
        if i > 0 && rng.gen::<f64>() < style.pause_rate {
            pieces.push("(.)".to_string());
            pauses += 1;
        }
        if rng.gen::<f64>() < style.filler_rate {
            pieces.push(FILLERS[rng.gen_range(0..FILLERS.len())].to_string());
        }
        if rng.gen::<f64>() < XXX_RATE {
            pieces.push("xxx".to_string());
        }
        if rng.gen::<f64>() < style.retrace_rate {
            pieces.push(format!("{w} [//]"));
        }
        pieces.push((*w).to_string());
    }
    pieces.push(".".to_string());
    if timing {
        let start = *clock_ms;
        let end = start + 360 * tokens.len() as u64 + 420 * pauses + rng.gen_range(0..400);
        pieces.push(format!("\u{2022}{start}_{end}\u{2022}"));
        *clock_ms = end + rng.gen_range(150..600);
    }
    let mut out = format!("*PAR:\t{}", pieces.join(" "));
    if with_mor {
        let items: Vec<&str> = tokens.iter().map(|&(_, m)| m).collect();
        out.push_str(&format!("\n%mor:\t{} .", items.join(" ")));
    }
    out
}

fn visit_file(rng: &mut ChaCha8Rng, pid: &str, visit: u32, label: Label, inject: f64) -> String {
    let style = style(label);
    let timing = rng.gen::<f64>() < 0.85;
    let n_utt = rng.gen_range(10..=14);
    let follow_up = if rng.gen::<f64>() < 0.5 {
        Some(rng.gen_range(2..n_utt))
    } else {
        None
    };
    let mut clock_ms: u64 = rng.gen_range(800..2000);
    let mut lines = vec![
        "@Begin".to_string(),
        "@Languages:\teng".to_string(),
        "@Participants:\tPAR Participant, INV Investigator".to_string(),
        format!("@PID:\t{pid}"),
        format!("@Media:\t{pid}-v{visit}, audio"),
        "*INV:\ttell me everything you see going on in that picture .".to_string(),
    ];
    for u in 0..n_utt {
        if follow_up == Some(u) {
            lines.push("*INV:\tanything else ?".to_string());
        }
        let with_mor = rng.gen::<f64>() < 0.8;
        let tokens = utterance_tokens(rng, &style, inject);
        lines.push(render_par(
            rng,
            &tokens,
            &style,
            &mut clock_ms,
            timing,
            with_mor,
        ));
    }
    lines.push("@End".to_string());
    lines.join("\n") + "\n"
}

/// Generates the train-eval and validation corpora plus their manifests.
/// Participants are disjoint across the two splits; each has 2 or 3 visits,
/// so downstream visit selection has real work to do.
pub fn generate(cfg: &SyntheticConfig) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let inject = (cfg.marker_rate * INJECTION_BOOST).min(1.0);
    let mut files = Vec::new();
    let mut train_entries = Vec::new();
    let mut validation_entries = Vec::new();

    let groups = [
        (cfg.train_mci, Label::Mci, "mci", SplitRole::TrainEval),
        (
            cfg.train_control,
            Label::Control,
            "con",
            SplitRole::TrainEval,
        ),
        (
            cfg.validation_mci,
            Label::Mci,
            "vmci",
            SplitRole::Validation,
        ),
        (
            cfg.validation_control,
            Label::Control,
            "vcon",
            SplitRole::Validation,
        ),
    ];
    for (count, label, prefix, role) in groups {
        let dir = match role {
            SplitRole::TrainEval => "train_eval",
            SplitRole::Validation => "validation",
        };
        for p in 1..=count {
            let pid = format!("{prefix}-{p:02}");
            let visits = rng.gen_range(2..=3u32);
            for v in 1..=visits {
                let rel = format!("{dir}/{pid}-v{v}.cha");
                files.push(GeneratedFile {
                    relative_path: rel.clone(),
                    content: visit_file(&mut rng, &pid, v, label, inject),
                });
                let entry = ManifestEntry {
                    path: PathBuf::from(&rel),
                    participant_id: pid.clone(),
                    visit_index: v,
                    label,
                };
                match role {
                    SplitRole::TrainEval => train_entries.push(entry),
                    SplitRole::Validation => validation_entries.push(entry),
                }
            }
        }
    }

    let train = CorpusManifest::new(train_entries, SplitRole::TrainEval, PathBuf::from("."))
        .expect("generated train manifest is valid");
    let validation = CorpusManifest::new(
        validation_entries,
        SplitRole::Validation,
        PathBuf::from("."),
    )
    .expect("generated validation manifest is valid");
    files.push(GeneratedFile {
        relative_path: "train_eval.csv".to_string(),
        content: train.csv_string(),
    });
    files.push(GeneratedFile {
        relative_path: "validation.csv".to_string(),
        content: validation.csv_string(),
    });
    SyntheticCorpus { files }
}

const TOY: &[(&str, Label, &str)] = &[
    (
        "toy-mci-1",
        Label::Mci,
        "*PAR:\tthe boy is taking the thing from the jar . \u{2022}900_4100\u{2022}\n\
         %mor:\tdet|the n|boy cop|be&3S part|take-PRESP det|the n|thing prep|from det|the n|jar .\n\
         *PAR:\ti forget the word for it . \u{2022}4600_7000\u{2022}\n\
         *PAR:\tsome kind of stuff is spilling . \u{2022}7400_9900\u{2022}\n",
    ),
    (
        "toy-mci-2",
        Label::Mci,
        "*PAR:\tshe is reaching for the thing . \u{2022}1100_3600\u{2022}\n\
         %mor:\tpro|she cop|be&3S part|reach-PRESP prep|for det|the n|thing .\n\
         *PAR:\tyou know what i mean . \u{2022}4100_6000\u{2022}\n\
         *PAR:\tthe stuff is falling and i forget the word . \u{2022}6500_10200\u{2022}\n",
    ),
    (
        "toy-mci-3",
        Label::Mci,
        "*PAR:\tthere is something like that on the floor . \u{2022}1000_4200\u{2022}\n\
         *PAR:\tthe whatsit is full of stuff . \u{2022}4700_7100\u{2022}\n\
         *PAR:\ti guess the thing is falling . \u{2022}7600_10100\u{2022}\n",
    ),
    (
        "toy-con-1",
        Label::Control,
        "*PAR:\tthe water is overflowing in the sink . \u{2022}800_3700\u{2022}\n\
         %mor:\tdet|the n|water cop|be&3S part|overflow-PRESP prep|in det|the n|sink .\n\
         *PAR:\tthe faucet is splashing on the counter . \u{2022}4200_7000\u{2022}\n\
         *PAR:\tshe is drying a saucer by the cupboard . \u{2022}7500_10400\u{2022}\n",
    ),
    (
        "toy-con-2",
        Label::Control,
        "*PAR:\tthe stool is teetering under the boy . \u{2022}1200_3900\u{2022}\n\
         %mor:\tdet|the n|stool cop|be&3S part|teeter-PRESP prep|under det|the n|boy .\n\
         *PAR:\ta puddle of water is on the floor . \u{2022}4400_7300\u{2022}\n\
         *PAR:\tthe faucet is overflowing and the mother is oblivious . \u{2022}7800_11600\u{2022}\n",
    ),
    (
        "toy-con-3",
        Label::Control,
        "*PAR:\tthe water is splashing from the faucet . \u{2022}900_3800\u{2022}\n\
         *PAR:\tthe cupboard is open and the saucer is wet . \u{2022}4300_7600\u{2022}\n\
         *PAR:\tthere is a puddle beneath the sink . \u{2022}8100_10700\u{2022}\n",
    ),
];

/// A fixed six-file corpus (3 MCI, 3 control, one visit each), small enough
/// that leave-pair-out and extraction behavior can be checked by hand.
pub fn toy_corpus() -> SyntheticCorpus {
    let mut files = Vec::new();
    let mut entries = Vec::new();
    for &(pid, label, body) in TOY {
        let rel = format!("toy/{pid}-v1.cha");
        let content = format!(
            "@Begin\n@Languages:\teng\n@Participants:\tPAR Participant, INV Investigator\n\
             @PID:\t{pid}\n@Media:\t{pid}-v1, audio\n\
             *INV:\ttell me everything you see going on in that picture .\n{body}@End\n"
        );
        files.push(GeneratedFile {
            relative_path: rel.clone(),
            content,
        });
        entries.push(ManifestEntry {
            path: PathBuf::from(&rel),
            participant_id: pid.to_string(),
            visit_index: 1,
            label,
        });
    }
    let manifest = CorpusManifest::new(entries, SplitRole::TrainEval, PathBuf::from("."))
        .expect("toy manifest is valid");
    files.push(GeneratedFile {
        relative_path: "toy.csv".to_string(),
        content: manifest.csv_string(),
    });
    SyntheticCorpus { files }
}
