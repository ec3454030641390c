"""Reader-comment opinion mining for a news aggregator: feeds, scraping, corpus, stance/affinity classification and trend tables."""

__version__ = "0.1.0"
