"""Per-criterion details filled in by test_acceptance, printed by conftest."""
RESULTS: dict = {}


def record(num: int, title: str, detail: str) -> None:
    RESULTS[num] = (title, detail)
