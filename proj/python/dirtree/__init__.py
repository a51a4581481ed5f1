# Copyright 2026 The dirtree Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Directory extraction from visually rich pages.

Documents, models and gazetteers are passed as JSON text or as paths; results
come back as Python objects.
"""

import json
import os

from . import _dirtree
from ._dirtree import InputError, InvariantError, run_cli

__all__ = [
    "InputError",
    "InvariantError",
    "blocks",
    "classify",
    "run_cli",
    "segment",
    "train",
    "tree",
    "validate",
]


def _text(value):
    if value is None:
        return None
    if isinstance(value, os.PathLike) or (
        isinstance(value, str)
        and "\n" not in value
        and not value.lstrip().startswith(("{", "["))
    ):
        with open(value, encoding="utf-8") as f:
            return f.read()
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return value


def validate(doc):
    """Returns (pages, groups) for a valid document, raises InputError otherwise."""
    return _dirtree.validate(_text(doc))


def classify(doc, model, threshold=0.5):
    return json.loads(_dirtree.classify(_text(doc), _text(model), threshold))


def _staged(fn, doc, pages, model, gazetteer, threshold):
    return json.loads(fn(_text(doc), pages, _text(model), _text(gazetteer), threshold))


def segment(doc, pages="auto", model=None, gazetteer=None, threshold=0.5):
    return _staged(_dirtree.segment, doc, pages, model, gazetteer, threshold)


def tree(doc, pages="auto", model=None, gazetteer=None, threshold=0.5):
    return _staged(_dirtree.tree, doc, pages, model, gazetteer, threshold)


def blocks(doc, pages="auto", model=None, gazetteer=None, threshold=0.5):
    return _staged(_dirtree.blocks, doc, pages, model, gazetteer, threshold)


def train(csv, pos, neg, seed, n_trees=20, threads=0):
    """Trains the page classifier on a feature CSV; returns the model as a dict."""
    return json.loads(_dirtree.train(_text(csv), pos, neg, seed, n_trees, threads))
