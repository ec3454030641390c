"""File-to-file pipeline stages behind the CLI subcommands."""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import analysis
from .annotate import (
    export_annotation_template,
    import_annotations,
    sample_seed_set,
)
from .annotate import AnnotatedComment
from .classifier import (
    ClassificationResult,
    ClassifyConfig,
    HttpCompletionClient,
    classify_corpus,
    coverage,
    load_lexicons,
    load_programs,
    read_results,
)
from .config import RunConfig
from .corpus import (
    Article,
    CorpusStore,
    comment_index,
    export_jsonl,
    parse_corpus,
    prune_vocabulary,
    tokenize_clean,
)
from .feeds import FeedError, FeedItem, build_feed_url, parse_feed
from .labels import PartyLabel, StanceLabel
from .scraper import (
    ExtractionError,
    Fetcher,
    FetchError,
    FileTransport,
    extract_article,
    extract_comments,
)
from .tables import Shares, Table, emit_tables

log = logging.getLogger(__name__)

FEEDS = "feeds.jsonl"
SCRAPED = "scraped.jsonl"
CORPUS = "corpus.xml"
CORPUS_JSONL = "corpus.jsonl"
TEMPLATE = "annotation_template.tsv"
GOLD = "annotations.jsonl"
RESULTS = "results.jsonl"
RESULTS_TABLE = "results.tsv"
ANALYSIS = "analysis.json"
TABLES = "tables"
RUN_LOG = "run.log"
MAX_COMMENT_PAGES = 20


class MissingArtifact(RuntimeError):
    def __init__(self, path: Path, producer: str):
        super().__init__(f"missing {path.name} ({path}); run `{producer}` first")
        self.path = path
        self.producer = producer


class StageError(RuntimeError):
    pass


@dataclass
class StageReport:
    stage: str
    counts: dict[str, int] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def line(self) -> str:
        parts = ", ".join(f"{k}={v}" for k, v in self.counts.items())
        return f"{self.stage}: {parts}" + (f" ({len(self.warnings)} warnings)" if self.warnings else "")


def _require(path: Path, producer: str) -> Path:
    if not path.exists():
        raise MissingArtifact(path, producer)
    return path


def _write_jsonl(path: Path, records) -> None:
    path.write_text(
        "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n" for r in records),
        "utf-8",
    )


def _read_jsonl(path: Path) -> list[dict]:
    return [json.loads(l) for l in path.read_text("utf-8").split("\n") if l.strip()]


def make_fetcher(cfg: RunConfig) -> Fetcher:
    transport = FileTransport(cfg.fixture_dir) if cfg.fixture_dir else None
    return Fetcher(cfg.fetch, transport)


def _in_window(item: FeedItem, cfg: RunConfig) -> bool:
    if item.published_at is None:
        return cfg.since is None and cfg.until is None
    day = item.published_at.date()
    return (cfg.since is None or day >= cfg.since) and (cfg.until is None or day <= cfg.until)


def fetch_feeds(cfg: RunConfig, fetcher: Fetcher | None = None) -> StageReport:
    fetcher = fetcher or make_fetcher(cfg)
    report = StageReport("fetch-feeds")
    if not cfg.sources:
        raise StageError("no feed sources configured")
    kept: dict[str, FeedItem] = {}
    seen = 0
    for source in cfg.sources:
        url = build_feed_url(source)
        try:
            page = fetcher.fetch(url)
            parsed = parse_feed(page.body, source)
        except (FetchError, FeedError) as exc:
            report.warnings.append(f"{url}: {exc}")
            log.warning("feed %s failed: %s", url, exc)
            continue
        report.warnings.extend(f"{url}: {w}" for w in parsed.warnings)
        for item in parsed.items:
            seen += 1
            if _in_window(item, cfg) and item.guid not in kept:
                kept[item.guid] = item
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    _write_jsonl(cfg.output_dir / FEEDS, (i.to_dict() for i in kept.values()))
    report.counts = {"items_seen": seen, "items_kept": len(kept)}
    return report


def _scrape_one(fetcher: Fetcher, item: FeedItem, year: int) -> tuple[dict | None, list[str]]:
    warnings: list[str] = []
    try:
        page = fetcher.fetch(item.link)
        content = extract_article(page)
    except (FetchError, ExtractionError) as exc:
        return None, [f"{item.link}: {exc}"]
    comments = []
    visited = {item.link}
    while True:
        extracted = extract_comments(page, year)
        comments.extend(extracted.records)
        warnings.extend(f"{page.url}: {w}" for w in extracted.warnings)
        nxt = extracted.next_page
        if not nxt or nxt in visited or len(visited) >= MAX_COMMENT_PAGES:
            break
        visited.add(nxt)
        try:
            page = fetcher.fetch(nxt)
        except FetchError as exc:
            warnings.append(f"{nxt}: {exc}")
            break
    published = item.published_at.date() if item.published_at else None
    record = {
        "guid": item.guid,
        "link": item.link,
        "title": item.title or content.title,
        "category_label": item.category_label,
        "published_date": published.isoformat() if published else None,
        "summary": item.description,
        "body_text": content.body_text,
        "comments": [c.to_dict() for c in comments],
    }
    return record, warnings


def scrape(cfg: RunConfig, fetcher: Fetcher | None = None) -> StageReport:
    items = [FeedItem.from_dict(r) for r in _read_jsonl(_require(cfg.output_dir / FEEDS, "fetch-feeds"))]
    fetcher = fetcher or make_fetcher(cfg)
    report = StageReport("scrape")
    records = []
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        for item, (record, warnings) in zip(
            items,
            pool.map(lambda it: _scrape_one(fetcher, it, _year(cfg, it)), items),
        ):
            report.warnings.extend(warnings)
            if record is None:
                log.warning("skipping %s", item.link)
                continue
            if record["published_date"] is None:
                report.warnings.append(f"{item.link}: no publication date, skipped")
                continue
            records.append(record)
    _write_jsonl(cfg.output_dir / SCRAPED, records)
    report.counts = {
        "articles": len(records),
        "comments": sum(len(r["comments"]) for r in records),
        "failed": len(items) - len(records),
    }
    return report


def _year(cfg: RunConfig, item: FeedItem) -> int:
    if cfg.since is not None:
        return cfg.since.year
    return item.published_at.year if item.published_at else 1970


def build_corpus(cfg: RunConfig) -> StageReport:
    records = _read_jsonl(_require(cfg.output_dir / SCRAPED, "scrape"))
    store = CorpusStore.load(cfg.output_dir / CORPUS)
    report = StageReport("build-corpus")
    outcomes: dict[str, int] = {"stored": 0, "duplicate": 0, "updated": 0}
    for record in records:
        article = Article.from_dict(record)
        outcomes[store.upsert(article).value] += 1
    store.save(cfg.output_dir / CORPUS)
    (cfg.output_dir / CORPUS_JSONL).write_bytes(export_jsonl(store.articles()))
    report.counts = {**outcomes, "articles": len(store)}
    return report


def load_corpus(cfg: RunConfig) -> list[Article]:
    return parse_corpus(_require(cfg.output_dir / CORPUS, "build-corpus").read_bytes())


def sample_annotate(cfg: RunConfig) -> StageReport:
    articles = load_corpus(cfg)
    refs = sample_seed_set(articles, cfg.seed_size, cfg.seed)
    (cfg.output_dir / TEMPLATE).write_text(export_annotation_template(refs, articles), "utf-8")
    return StageReport("sample-annotate", {"sampled": len(refs)})


def _annotation_record(a: AnnotatedComment) -> dict:
    return {
        "comment_ref": a.comment_ref,
        "article_title": a.article_title,
        "author": a.author,
        "stance": a.stance.name,
        "party": a.party.name,
        "keywords": list(a.keywords),
    }


def load_gold(cfg: RunConfig) -> list[AnnotatedComment]:
    path = cfg.output_dir / GOLD
    if not path.exists():
        return []
    return [
        AnnotatedComment(
            r["comment_ref"], r["article_title"], r["author"], StanceLabel[r["stance"]],
            PartyLabel[r["party"]], tuple(r["keywords"]),
        )
        for r in _read_jsonl(path)
    ]


def import_annotation_file(cfg: RunConfig, path: Path | None = None) -> StageReport:
    path = path or cfg.annotations
    if path is None:
        raise StageError("no annotation file given (use --file or classifier.annotations)")
    annotations = import_annotations(path)
    articles = load_corpus(cfg)
    index = comment_index(articles)
    report = StageReport("import-annotations")
    dangling = [a.comment_ref for a in annotations if a.comment_ref and a.comment_ref not in index]
    report.warnings.extend(f"annotation for unknown comment {ref!r}" for ref in dangling)
    _write_jsonl(cfg.output_dir / GOLD, (_annotation_record(a) for a in annotations))
    report.counts = {"annotations": len(annotations), "linked": len(annotations) - len(dangling)}
    return report


def classifier_config(cfg: RunConfig, endpoint=None) -> ClassifyConfig:
    clf = ClassifyConfig(
        mode=cfg.mode,
        template_id=cfg.template_id,
        vocab=cfg.vocab,
        results_path=cfg.output_dir / RESULTS,
        seed=load_gold(cfg),
    )
    if cfg.mode == "lexicon":
        if cfg.lexicons_dir is None:
            raise StageError("lexicon mode needs classifier.lexicons_dir")
        clf.lexicons = load_lexicons(cfg.lexicons_dir, cfg.vocab.stopword_list)
    else:
        if cfg.programs_dir is None:
            raise StageError("remote mode needs classifier.programs_dir")
        clf.programs = load_programs(cfg.programs_dir)
        clf.endpoint = endpoint or HttpCompletionClient(
            cfg.endpoint.url, cfg.endpoint.model, cfg.endpoint.api_key_env, cfg.endpoint.timeout
        )
        clf.parallelism = cfg.endpoint.parallelism
        clf.max_retries = cfg.endpoint.max_retries
    return clf


def results_table(results: list[ClassificationResult], articles: list[Article]) -> str:
    index = comment_index(articles)
    out = io.StringIO()
    writer = csv.writer(out, delimiter="\t", lineterminator="\n")
    writer.writerow(["ID", "Título", "Categoría", "Fecha", "Usuario", "Tipo", "Inclinación",
                     "Palabras_Clave", "Fuente"])
    for r in results:
        article, comment = index[r.comment_ref]
        writer.writerow([
            r.comment_ref, article.title, article.category_label,
            article.published_date.isoformat(), comment.author, r.stance.render(),
            r.party.display_name, ", ".join(r.keywords), r.source,
        ])
    return out.getvalue()


def classify(cfg: RunConfig, endpoint=None) -> StageReport:
    articles = load_corpus(cfg)
    run = classify_corpus(articles, classifier_config(cfg, endpoint))
    (cfg.output_dir / RESULTS_TABLE).write_text(results_table(run.results, articles), "utf-8")
    report = StageReport("classify", run.summary)
    report.warnings.extend(f"{f.comment_ref}: {f.error}" for f in run.failures)
    return report


def _load_results(cfg: RunConfig) -> list[ClassificationResult]:
    done, _ = read_results(_require(cfg.output_dir / RESULTS, "classify"))
    return list(done.values())


def analyze(cfg: RunConfig) -> StageReport:
    articles = load_corpus(cfg)
    results = _load_results(cfg)
    if not results:
        raise StageError("no classification results to analyze")
    docs = analysis.tokens_by_comment(articles, lambda text: tokenize_clean(text, cfg.vocab))
    refs = list(docs)
    pruned = prune_vocabulary([docs[r] for r in refs], cfg.vocab) if refs else None
    if pruned is not None:
        docs = dict(zip(refs, pruned.docs))
    products: dict = {
        "affinity_distribution": {
            p.code: n for p, n in analysis.affinity_distribution(results).items()
        },
        "coverage": {
            "classified": len(results),
            "assigned": sum(r.party is not PartyLabel.INDETERMINADO for r in results),
            "coverage": round(coverage(results), 6),
        },
        "topic_interest": _matrix_dict(analysis.topic_interest(results, articles)),
    }
    if cfg.programs_dir is not None and cfg.programs_dir.exists():
        programs = load_programs(cfg.programs_dir)
        if programs:
            products["program_topics"] = _matrix_dict(analysis.program_topics(programs))
    if cfg.grouping:
        report_terms = analysis.distinctive_terms(results, cfg.grouping, docs, mode=cfg.term_mode)
        products["distinctive_terms"] = {g: [[t, n] for t, n in terms] for g, terms in report_terms.items()}
    (cfg.output_dir / ANALYSIS).write_text(
        json.dumps(products, ensure_ascii=False, sort_keys=True, indent=2) + "\n", "utf-8"
    )
    return StageReport("analyze", {"results": len(results), "products": len(products)})


def _matrix_dict(m: analysis.InterestMatrix) -> dict:
    return {"rows": m.rows, "columns": m.columns, "counts": m.counts, "flagged": sorted(m.flagged)}


def report_products(data: dict) -> dict:
    products: dict = {}
    for name in ("topic_interest", "program_topics"):
        if name in data:
            m = analysis.InterestMatrix(data[name]["rows"], data[name]["columns"],
                                        data[name]["counts"], set(data[name]["flagged"]))
            products[name] = m
            products[f"{name}_shares"] = Shares(m)
    if "affinity_distribution" in data:
        products["affinity_distribution"] = {
            PartyLabel(code): n for code, n in data["affinity_distribution"].items()
        }
    if "coverage" in data:
        products["coverage"] = Table(
            ["label", "value"], [[k, data["coverage"][k]] for k in sorted(data["coverage"])]
        )
    if "distinctive_terms" in data:
        products["distinctive_terms"] = {
            g: [(t, n) for t, n in terms] for g, terms in data["distinctive_terms"].items()
        }
    return products


def report(cfg: RunConfig) -> StageReport:
    data = json.loads(_require(cfg.output_dir / ANALYSIS, "analyze").read_text("utf-8"))
    written = emit_tables(report_products(data), cfg.output_dir / TABLES, cfg.table_format)
    return StageReport("report", {"tables": len(written)})


STAGES = {
    "fetch-feeds": fetch_feeds,
    "scrape": scrape,
    "build-corpus": build_corpus,
    "sample-annotate": sample_annotate,
    "import-annotations": import_annotation_file,
    "classify": classify,
    "analyze": analyze,
    "report": report,
}


def run_all(cfg: RunConfig, fetcher: Fetcher | None = None, endpoint=None) -> list[StageReport]:
    fetcher = fetcher or make_fetcher(cfg)
    reports = [fetch_feeds(cfg, fetcher), scrape(cfg, fetcher), build_corpus(cfg),
               sample_annotate(cfg)]
    if cfg.annotations is not None:
        reports.append(import_annotation_file(cfg))
    reports += [classify(cfg, endpoint), analyze(cfg), report(cfg)]
    return reports
