"""chronodiff: change-text search over archived web-page versions."""

from .analytics import TermCategory, TemporalRules, categorize_terms, top_deleted_terms
from .animate import AnimTiming, AnimationPlan, build_animation, build_animation_plan
from .diffs import EditScript, Region, apply_script, sliding_sequence, token_diff
from .extract import ExtractedDoc, MementoRef, build_extracted_doc, extract_text, tokenize
from .index import ChangeIndex, Posting, build_index, load, lookup, persist
from .memento import (
    PageCaptures,
    PairingReport,
    TimeMapEntry,
    find_pairs,
    pairing_report,
    parse_timemap,
    refine_change_interval,
)
from .query import ChangeQuery, SearchHit, execute, make_snippet, rank_key
from .service import ApiConfig, IndexHolder, closest_memento, create_app
from .temporal import (
    ChangeSet,
    CoalescedVersion,
    Lifespan,
    VersionChain,
    build_chain,
    compute_changes,
    term_lifespan,
)
from .warc import (
    CanonicalUrl,
    MementoRecord,
    canonicalize_url,
    format_memento_datetime,
    parse_memento_datetime,
    parse_warc,
)

__version__ = "0.1.0"
