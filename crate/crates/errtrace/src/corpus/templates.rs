//! Built-in template inventory for the synthetic conditional-generation task.
//!
//! Each family pairs an event clause (the part of a source document that the
//! target restates) with a compressed summary clause. `@` marks the entity
//! slot. Sources are padded with entity-free distractor clauses so the model
//! has to locate the entity rather than memorize positions.

/// One template family: `event` is the leading source clause, `summary` the
/// full target. Both contain exactly one `@` entity slot.
pub struct TemplateFamily {
    pub event: &'static [&'static str],
    pub summary: &'static [&'static str],
}

pub const FAMILIES: &[TemplateFamily] = &[
    TemplateFamily {
        event: &["@", "secured", "a", "dramatic", "victory", "over", "the", "visitors", "in", "the", "final"],
        summary: &["@", "claim", "dramatic", "final", "victory"],
    },
    TemplateFamily {
        event: &["@", "announced", "a", "new", "trade", "agreement", "with", "neighboring", "partners", "yesterday"],
        summary: &["@", "unveil", "new", "trade", "agreement"],
    },
    TemplateFamily {
        event: &["officials", "in", "@", "confirmed", "record", "rainfall", "across", "the", "northern", "region"],
        summary: &["record", "rainfall", "hits", "@"],
    },
    TemplateFamily {
        event: &["voters", "in", "@", "backed", "the", "reform", "coalition", "by", "a", "wide", "margin"],
        summary: &["@", "voters", "back", "reform", "coalition"],
    },
    TemplateFamily {
        event: &["researchers", "in", "@", "unveiled", "a", "breakthrough", "in", "battery", "technology", "this", "week"],
        summary: &["@", "team", "reveals", "battery", "breakthrough"],
    },
    TemplateFamily {
        event: &["hospitals", "across", "@", "reported", "a", "sharp", "decline", "in", "seasonal", "infections"],
        summary: &["seasonal", "infections", "decline", "across", "@"],
    },
    TemplateFamily {
        event: &["@", "posted", "stronger", "than", "expected", "growth", "figures", "for", "the", "quarter"],
        summary: &["@", "growth", "beats", "expectations"],
    },
    TemplateFamily {
        event: &["@", "opened", "a", "high", "speed", "rail", "link", "connecting", "two", "major", "cities"],
        summary: &["@", "opens", "high", "speed", "rail", "link"],
    },
    TemplateFamily {
        event: &["a", "museum", "in", "@", "recovered", "a", "stolen", "masterpiece", "after", "a", "long", "investigation"],
        summary: &["stolen", "masterpiece", "recovered", "in", "@"],
    },
    TemplateFamily {
        event: &["engineers", "in", "@", "deployed", "a", "solar", "farm", "powering", "thousands", "of", "homes"],
        summary: &["@", "deploys", "major", "solar", "farm"],
    },
    TemplateFamily {
        event: &["@", "reached", "the", "quarter", "finals", "after", "a", "stunning", "comeback", "win"],
        summary: &["@", "reach", "the", "quarter", "finals"],
    },
    TemplateFamily {
        event: &["rangers", "in", "@", "rescued", "a", "rare", "eagle", "found", "injured", "near", "the", "coast"],
        summary: &["rare", "eagle", "rescued", "in", "@"],
    },
    TemplateFamily {
        event: &["the", "central", "bank", "of", "@", "held", "interest", "rates", "steady", "despite", "pressure"],
        summary: &["@", "holds", "interest", "rates", "steady"],
    },
    TemplateFamily {
        event: &["the", "annual", "film", "festival", "in", "@", "drew", "record", "crowds", "over", "the", "weekend"],
        summary: &["@", "festival", "draws", "record", "crowds"],
    },
    TemplateFamily {
        event: &["schools", "in", "@", "adopted", "a", "new", "curriculum", "focused", "on", "digital", "skills"],
        summary: &["@", "schools", "adopt", "digital", "curriculum"],
    },
    TemplateFamily {
        event: &["a", "rocket", "launched", "from", "@", "carried", "a", "weather", "satellite", "into", "orbit"],
        summary: &["@", "launches", "weather", "satellite"],
    },
];

/// Entity-free filler clauses appended after the event clause.
pub const DISTRACTORS: &[&[&str]] = &[
    &["analysts", "remain", "cautious", "about", "the", "broader", "outlook"],
    &["the", "committee", "will", "meet", "again", "next", "month"],
    &["local", "residents", "welcomed", "the", "announcement", "warmly"],
    &["critics", "argue", "the", "plan", "lacks", "sufficient", "funding"],
    &["further", "details", "are", "expected", "in", "the", "coming", "days"],
    &["the", "decision", "follows", "months", "of", "negotiations"],
    &["observers", "described", "the", "mood", "as", "cautiously", "optimistic"],
    &["a", "spokesperson", "declined", "to", "comment", "on", "the", "matter"],
    &["the", "report", "cited", "several", "independent", "sources"],
    &["markets", "showed", "little", "reaction", "to", "the", "news"],
    &["officials", "promised", "a", "full", "review", "of", "procedures"],
    &["the", "announcement", "drew", "mixed", "reactions", "from", "experts"],
    &["organizers", "thanked", "volunteers", "for", "their", "support"],
    &["questions", "remain", "about", "the", "long", "term", "impact"],
    &["the", "project", "has", "faced", "repeated", "delays", "before"],
    &["supporters", "called", "the", "move", "long", "overdue"],
    &["an", "inquiry", "into", "the", "matter", "continues"],
    &["the", "figures", "were", "revised", "upward", "slightly"],
    &["preparations", "had", "been", "underway", "for", "weeks"],
    &["similar", "efforts", "failed", "twice", "in", "recent", "years"],
    &["the", "weather", "played", "no", "part", "in", "the", "outcome"],
    &["attendance", "exceeded", "expectations", "by", "a", "wide", "margin"],
    &["funding", "was", "secured", "through", "private", "donations"],
    &["the", "timeline", "remains", "subject", "to", "change"],
];

/// Default entity inventory. The first eight are the canary pool used by the
/// default config; the rest are background entities.
pub const DEFAULT_ENTITIES: &[&str] = &[
    "england", "china", "wales", "scotland", "australia", "france", "london", "belfast",
    "brazil", "japan", "india", "egypt", "canada", "mexico", "norway", "kenya",
    "peru", "spain", "italy", "greece", "turkey", "poland", "vienna", "oslo",
    "cairo", "dublin", "madrid", "berlin",
];

/// Default per-entity sampling weights. Canary originals get pinned shares so
/// that injection at probability 0.5 lands in the 0.3-1.2% band of the
/// training data; every entity without an explicit weight shares the
/// remaining mass uniformly.
pub const DEFAULT_ENTITY_WEIGHTS: &[(&str, f64)] = &[
    ("england", 0.024),
    ("wales", 0.019),
    ("australia", 0.010),
    ("london", 0.013),
];
