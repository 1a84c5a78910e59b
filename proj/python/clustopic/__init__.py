# Copyright 2026 The clustopic Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Document clustering and cluster keyword extraction."""

import json
import os

from . import _core
from ._core import (
    ClustopicError,
    __version__,
    adjusted_rand,
    ami,
    build_counts,
    c_tf_idf,
    cosine_similarity,
    hdbscan,
    histogram,
    kmeans,
    kmedoids,
    load_embeddings,
    nmi,
    pca,
    purity,
    rand_index,
    rdf,
    save_embeddings,
    tf_idf,
    tf_rdf,
    tokenize,
    top_terms,
)


def _config_text(config):
    if isinstance(config, (str, os.PathLike)) and os.path.isfile(config):
        with open(config) as f:
            return f.read(), os.path.dirname(os.path.abspath(config))
    return json.dumps(config), ""


def run(config):
    """Runs the pipeline. config is a dict or a path to a JSON config file.

    Returns the manifest as a dict.
    """
    text, base = _config_text(config)
    return json.loads(_core.run(text, base))


def compare_schemes(config, schemes=("tf_rdf", "c_tf_idf", "tf_idf")):
    text, base = _config_text(config)
    return _core.compare_schemes(text, list(schemes), base)


__all__ = [
    "ClustopicError",
    "__version__",
    "adjusted_rand",
    "ami",
    "build_counts",
    "c_tf_idf",
    "compare_schemes",
    "cosine_similarity",
    "hdbscan",
    "histogram",
    "kmeans",
    "kmedoids",
    "load_embeddings",
    "nmi",
    "pca",
    "purity",
    "rand_index",
    "rdf",
    "run",
    "save_embeddings",
    "tf_idf",
    "tf_rdf",
    "tokenize",
    "top_terms",
]
