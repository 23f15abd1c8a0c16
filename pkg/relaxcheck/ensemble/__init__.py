from .datamodel import EnsembleConfig, EnsembleStats, SampleRecord, SearchResult
from .results import summarize_ensembles
from .run import run_ensemble, save_ensemble
from .sample import RNG_NAME, sample_generator, sample_rng
from .search import saturation_search
