"""Bundled study cases, each small enough for the enumeration oracle.

Every case keeps the binary count of its largest variant at or below 16 so
``enumerate_exact`` can certify the optimum; the test suite leans on that
to cross-check the branch-and-bound search.
"""

from importlib import resources

from ..case import Case, parse_case


def case_names() -> list[str]:
    """Sorted names of all bundled cases."""
    root = resources.files(__package__)
    return sorted(
        entry.name[: -len(".json")]
        for entry in root.iterdir()
        if entry.name.endswith(".json")
    )


def load_bundled(name: str) -> Case:
    """Load a bundled case by name (no directory, no extension)."""
    entry = resources.files(__package__) / f"{name}.json"
    try:
        text = entry.read_text(encoding="utf-8")
    except FileNotFoundError:
        known = ", ".join(case_names())
        raise KeyError(f"no bundled case named {name!r}; available: {known}")
    return parse_case(text)
