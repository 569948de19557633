use std::collections::{HashMap, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{read, write, DatasetError};
use crate::game::{Hotel, Review, REVIEWS_PER_HOTEL};
use crate::rng::seeded;

/// Characters required across both parts of a dataset review.
pub const MIN_REVIEW_CHARS: usize = 100;

const CORPUS_FORMAT: &str = "persuasion-corpus";
const CORPUS_VERSION: u32 = 1;
const CSV_MARKER: &str = "# persuasion-corpus ";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    #[default]
    Train,
    Test,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusMeta {
    #[serde(default)]
    pub split: Split,
    #[serde(default)]
    pub provenance: String,
    /// Allows reviews shorter than [`MIN_REVIEW_CHARS`]; set only for
    /// synthetic or fixture data.
    #[serde(default)]
    pub short_text_waiver: bool,
}

impl Default for CorpusMeta {
    fn default() -> Self {
        CorpusMeta {
            split: Split::Train,
            provenance: String::new(),
            short_text_waiver: false,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    #[serde(flatten)]
    meta: CorpusMeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Csv,
    Jsonl,
}

impl CorpusFormat {
    /// From the file extension; anything but `.jsonl`/`.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl" | "json") => CorpusFormat::Jsonl,
            _ => CorpusFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    hotels: Vec<Hotel>,
    index: HashMap<String, usize>,
    pub meta: CorpusMeta,
}

impl Corpus {
    /// Checks unique hotel and review ids and review lengths.
    pub fn new(hotels: Vec<Hotel>, meta: CorpusMeta) -> Result<Self, DatasetError> {
        let mut index = HashMap::new();
        let mut review_ids = HashSet::new();
        for (i, h) in hotels.iter().enumerate() {
            if index.insert(h.id().to_string(), i).is_some() {
                return Err(DatasetError::Data(format!("duplicate hotel id {}", h.id())));
            }
            for r in h.reviews() {
                if !review_ids.insert(r.id.as_str()) {
                    return Err(DatasetError::Data(format!("duplicate review id {}", r.id)));
                }
                if !meta.short_text_waiver && r.text_len() < MIN_REVIEW_CHARS {
                    return Err(DatasetError::Data(format!(
                        "review {} has {} characters, fewer than {MIN_REVIEW_CHARS}",
                        r.id,
                        r.text_len()
                    )));
                }
            }
        }
        Ok(Corpus { hotels, index, meta })
    }

    pub fn hotels(&self) -> &[Hotel] {
        &self.hotels
    }

    pub fn into_hotels(self) -> Vec<Hotel> {
        self.hotels
    }

    pub fn len(&self) -> usize {
        self.hotels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hotels.is_empty()
    }

    pub fn hotel(&self, id: &str) -> Option<&Hotel> {
        self.index.get(id).map(|&i| &self.hotels[i])
    }

    pub fn review_count(&self) -> usize {
        self.hotels.iter().map(Hotel::len).sum()
    }

    /// Random disjoint train/test split with `test_fraction` of the hotels
    /// (at least one of each when possible) in the test part.
    pub fn split(&self, test_fraction: f64, seed: u64) -> (Corpus, Corpus) {
        let mut order: Vec<usize> = (0..self.hotels.len()).collect();
        order.shuffle(&mut seeded(seed));
        let n_test = ((self.hotels.len() as f64 * test_fraction).round() as usize)
            .clamp(usize::from(self.hotels.len() > 1), self.hotels.len().saturating_sub(1));
        let (test_idx, train_idx) = order.split_at(n_test);
        let part = |idx: &[usize], split| {
            let mut idx = idx.to_vec();
            idx.sort_unstable();
            Corpus::new(
                idx.iter().map(|&i| self.hotels[i].clone()).collect(),
                CorpusMeta {
                    split,
                    ..self.meta.clone()
                },
            )
            .expect("a subset of a valid corpus is valid")
        };
        (part(train_idx, Split::Train), part(test_idx, Split::Test))
    }

    fn header(&self) -> String {
        serde_json::to_string(&Header {
            format: CORPUS_FORMAT.into(),
            version: CORPUS_VERSION,
            meta: self.meta.clone(),
        })
        .expect("headers serialise")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(["hotel_id", "review_id", "score", "positive_text", "negative_text"])
            .expect("in-memory write");
        for h in &self.hotels {
            for r in h.reviews() {
                let score = r.score.to_string();
                w.write_record([h.id(), &r.id, &score, &r.positive_text, &r.negative_text])
                    .expect("in-memory write");
            }
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input");
        format!("{CSV_MARKER}{}\n{body}", self.header())
    }

    pub fn from_csv(text: &str) -> Result<Self, DatasetError> {
        let (meta, body, offset) = match text.strip_prefix(CSV_MARKER) {
            Some(rest) => {
                let (line, body) = rest.split_once('\n').unwrap_or((rest, ""));
                let header: Header =
                    serde_json::from_str(line.trim_end()).map_err(|e| DatasetError::row(1, format!("bad metadata: {e}")))?;
                check_header(&header, 1)?;
                (header.meta, body, 1)
            }
            None => (CorpusMeta::default(), text, 0),
        };
        let mut reader = csv::ReaderBuilder::new().flexible(false).from_reader(body.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| DatasetError::row(offset + 1, e.to_string()))?
            .clone();
        let cols = Columns::resolve(&headers).map_err(|m| DatasetError::row(offset + 1, m))?;

        let mut hotels: Vec<Hotel> = Vec::new();
        let mut current: Option<(String, Vec<Review>, u64)> = None;
        let mut seen: HashSet<String> = HashSet::new();
        let finish = |id: String, reviews: Vec<Review>, line: u64, hotels: &mut Vec<Hotel>| {
            let n = reviews.len();
            Hotel::new(id.clone(), reviews)
                .map(|h| hotels.push(h))
                .map_err(|_| DatasetError::row(line, format!("hotel {id} has {n} reviews, expected {REVIEWS_PER_HOTEL}")))
        };
        for record in reader.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line()) + offset;
                DatasetError::row(line, e.to_string())
            })?;
            let line = record.position().map_or(0, |p| p.line()) + offset;
            let field = |i: usize| record.get(i).unwrap_or("");
            let hotel_id = field(cols.hotel).trim().to_string();
            if hotel_id.is_empty() {
                return Err(DatasetError::row(line, "empty hotel id"));
            }
            let score: f64 = field(cols.score)
                .trim()
                .parse()
                .map_err(|_| DatasetError::row(line, format!("score {:?} is not a number", field(cols.score))))?;
            let review = Review::new(field(cols.review).trim(), score, field(cols.positive), field(cols.negative))
                .map_err(|e| DatasetError::row(line, e.to_string()))?;
            match &mut current {
                Some((id, reviews, _)) if *id == hotel_id => reviews.push(review),
                _ => {
                    if let Some((id, reviews, start)) = current.take() {
                        finish(id, reviews, start, &mut hotels)?;
                    }
                    if !seen.insert(hotel_id.clone()) {
                        return Err(DatasetError::row(
                            line,
                            format!("hotel {hotel_id} appears again after other hotels (duplicate or non-contiguous rows)"),
                        ));
                    }
                    current = Some((hotel_id, vec![review], line));
                }
            }
        }
        if let Some((id, reviews, start)) = current.take() {
            finish(id, reviews, start, &mut hotels)?;
        }
        Corpus::new(hotels, meta)
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for h in &self.hotels {
            out.push_str(&serde_json::to_string(h).expect("hotels serialise"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, DatasetError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or_else(|| DatasetError::row(1, "empty corpus file"))?;
        let header: Header = serde_json::from_str(first).map_err(|e| DatasetError::row(1, format!("bad metadata: {e}")))?;
        check_header(&header, 1)?;
        let mut hotels = Vec::new();
        for (i, line) in lines {
            let h: Hotel = serde_json::from_str(line).map_err(|e| DatasetError::row(i as u64 + 1, e.to_string()))?;
            hotels.push(h);
        }
        Corpus::new(hotels, header.meta)
    }

    pub fn load(path: &Path) -> Result<Self, DatasetError> {
        let text = read(path)?;
        match CorpusFormat::from_path(path) {
            CorpusFormat::Csv => Self::from_csv(&text),
            CorpusFormat::Jsonl => Self::from_jsonl(&text),
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), DatasetError> {
        let text = match CorpusFormat::from_path(path) {
            CorpusFormat::Csv => self.to_csv(),
            CorpusFormat::Jsonl => self.to_jsonl(),
        };
        write(path, &text)
    }
}

fn check_header(h: &Header, line: u64) -> Result<(), DatasetError> {
    if h.format != CORPUS_FORMAT || h.version != CORPUS_VERSION {
        return Err(DatasetError::row(
            line,
            format!("unsupported corpus format {} version {}", h.format, h.version),
        ));
    }
    Ok(())
}

/// Column positions, found by name or by one of the original dataset's names.
struct Columns {
    hotel: usize,
    review: usize,
    score: usize,
    positive: usize,
    negative: usize,
}

const ALIASES: [(&str, &[&str]); 5] = [
    ("hotel_id", &["hotel_id", "hotel", "hotelid", "hotel_name"]),
    ("review_id", &["review_id", "review", "reviewid"]),
    ("score", &["score", "review_score", "reviewer_score", "reviewscore"]),
    ("positive_text", &["positive_text", "positive", "positive_review", "positivereview"]),
    ("negative_text", &["negative_text", "negative", "negative_review", "negativereview"]),
];

impl Columns {
    fn resolve(headers: &csv::StringRecord) -> Result<Self, String> {
        let names: Vec<String> = headers.iter().map(|h| h.trim().to_ascii_lowercase()).collect();
        let mut pos = [0usize; 5];
        for (slot, (canonical, aliases)) in pos.iter_mut().zip(ALIASES) {
            *slot = names
                .iter()
                .position(|n| aliases.contains(&n.as_str()))
                .ok_or_else(|| format!("missing column {canonical}"))?;
        }
        Ok(Columns {
            hotel: pos[0],
            review: pos[1],
            score: pos[2],
            positive: pos[3],
            negative: pos[4],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn review(id: &str, score: f64) -> Review {
        Review::new(
            id,
            score,
            "Great location, friendly \"helpful\" staff,\nand a lovely breakfast buffet every single morning",
            "The room was a bit small, noisy at night",
        )
        .unwrap()
    }

    fn corpus(n: usize) -> Corpus {
        let hotels = (0..n)
            .map(|h| Hotel::new(format!("h{h}"), (0..7).map(|r| review(&format!("h{h}-r{r}"), 5.0 + r as f64 * 0.7)).collect()).unwrap())
            .collect();
        Corpus::new(
            hotels,
            CorpusMeta {
                provenance: "unit test".into(),
                ..CorpusMeta::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn csv_and_jsonl_round_trip() {
        let c = corpus(10);
        assert_eq!((c.len(), c.review_count()), (10, 70));
        assert_eq!(Corpus::from_csv(&c.to_csv()).unwrap(), c);
        assert_eq!(Corpus::from_jsonl(&c.to_jsonl()).unwrap(), c);
        assert_eq!(Corpus::from_csv(&c.to_csv()).unwrap().to_csv(), c.to_csv());
    }

    #[test]
    fn bad_score_reports_its_line() {
        let text = corpus(2).to_csv().replacen(",5,", ",11,", 1);
        match Corpus::from_csv(&text) {
            Err(DatasetError::Row { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_and_split_hotels_are_rejected() {
        let c = corpus(2);
        let csv = c.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines.len() > 3);
        // Review texts span two lines, so work on records instead.
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["hotel_id", "review_id", "score", "positive_text", "negative_text"]).unwrap();
        let long = "x".repeat(120);
        for (h, r) in [("a", 0), ("a", 1), ("b", 0), ("a", 2)] {
            w.write_record([h, &format!("{h}{r}"), "7", &long, ""]).unwrap();
        }
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        let err = Corpus::from_csv(&text).unwrap_err();
        assert!(matches!(err, DatasetError::Row { .. }), "{err}");
        let dup = Corpus::new(vec![c.hotels()[0].clone(), c.hotels()[0].clone()], CorpusMeta::default());
        assert!(dup.is_err());
    }

    #[test]
    fn short_texts_need_the_waiver() {
        let h = Hotel::new("s", (0..7).map(|i| Review::new(format!("s{i}"), 7.0, "short", "").unwrap()).collect()).unwrap();
        assert!(Corpus::new(vec![h.clone()], CorpusMeta::default()).is_err());
        let waived = CorpusMeta {
            short_text_waiver: true,
            ..CorpusMeta::default()
        };
        let c = Corpus::new(vec![h], waived).unwrap();
        assert!(Corpus::from_csv(&c.to_csv()).unwrap().meta.short_text_waiver);
    }

    #[test]
    fn original_column_names_are_accepted() {
        let long = "y".repeat(100);
        let mut text = String::from("Hotel_Name,Review_Id,Reviewer_Score,Positive_Review,Negative_Review\n");
        for i in 0..7 {
            text.push_str(&format!("Grand,g{i},8.{i},{long},\n"));
        }
        let c = Corpus::from_csv(&text).unwrap();
        assert_eq!(c.hotel("Grand").unwrap().reviews()[3].score, 8.3);
    }

    #[test]
    fn split_is_disjoint_and_covering() {
        let c = corpus(10);
        let (train, test) = c.split(0.2, 4);
        assert_eq!((train.len(), test.len()), (8, 2));
        assert_eq!(test.meta.split, Split::Test);
        for h in test.hotels() {
            assert!(train.hotel(h.id()).is_none());
        }
    }
}
