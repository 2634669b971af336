"""Decide whether a decorated stable curve lies in the closure of a double
ramification locus.

Every function takes documents as dicts (or JSON strings) and returns dicts.
"""

import json

from . import _core
from ._core import InputError, ResourceLimit

__all__ = [
    "InputError",
    "ResourceLimit",
    "check_closure",
    "constraints",
    "evaluation",
    "hurwitz",
    "level_structures",
    "run",
    "stabilize",
    "summary",
    "twist",
    "validate",
    "verify",
]

schema_version = _core.schema_version
fixture_dir = _core.fixture_dir


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def validate(doc):
    return json.loads(_core.validate(_text(doc)))


def level_structures(doc, max_levels=None):
    return json.loads(_core.level_structures(_text(doc), max_levels))


def evaluation(doc):
    return json.loads(_core.evaluation(_text(doc)))


def constraints(doc):
    return json.loads(_core.constraints(_text(doc)))


def twist(doc):
    return json.loads(_core.twist(_text(doc)))


def stabilize(doc):
    return json.loads(_core.stabilize(_text(doc)))


def hurwitz(degree, profiles, genus=0):
    return json.loads(_core.hurwitz(degree, genus, [list(p) for p in profiles]))


def check_closure(doc, mu=None, max_multiplicity=None, max_levels=None):
    return json.loads(_core.check_closure(_text(doc), mu, max_multiplicity, max_levels))


def verify(doc, certificate, mu=None):
    return json.loads(_core.verify(_text(doc), _text(certificate), mu))


def summary(fixture):
    return json.loads(_core.summary(_text(fixture)))


def run(*args):
    """Run the command-line front end; returns (exit code, stdout, stderr)."""
    return _core.run([str(a) for a in args])
