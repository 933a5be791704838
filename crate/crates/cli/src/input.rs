use std::path::Path;

use anyhow::Context;
use spherecurve::{read_words, EmbeddingKey, GaussWord, PlaneCurve};

/// One input item: a bare word, or a word with chosen chiralities.
#[derive(Clone, Debug)]
pub enum Item {
    Word(GaussWord),
    Curve(PlaneCurve),
}

impl Item {
    pub fn word(&self) -> &GaussWord {
        match self {
            Item::Word(w) => w,
            Item::Curve(c) => c.word(),
        }
    }
}

fn parse_item(text: &str) -> spherecurve::Result<Item> {
    if text.contains('[') {
        let key: EmbeddingKey = text.parse()?;
        Ok(Item::Curve(PlaneCurve::from_key(&key)?))
    } else {
        Ok(Item::Word(GaussWord::parse(text)?))
    }
}

/// Reads each argument as a file of words when such a file exists, else as an inline word.
pub fn read_items(args: &[String]) -> anyhow::Result<Vec<Item>> {
    let mut items = Vec::new();
    for arg in args {
        let path = Path::new(arg);
        if path.is_file() {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
            if text.contains('[') {
                for (k, line) in text.lines().enumerate() {
                    let body = line.split('#').next().unwrap_or("").trim();
                    if !body.is_empty() {
                        items.push(parse_item(body).with_context(|| format!("{arg}:{}", k + 1))?);
                    }
                }
            } else {
                items.extend(read_words(&text).with_context(|| format!("reading {arg}"))?.into_iter().map(Item::Word));
            }
        } else {
            items.push(parse_item(arg).with_context(|| format!("input {arg:?}"))?);
        }
    }
    Ok(items)
}
