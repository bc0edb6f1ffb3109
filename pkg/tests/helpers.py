from pathlib import Path

TESTS_DIR = Path(__file__).parent
DATA_DIR = TESTS_DIR / "data"
PKG_DATA = Path(__file__).parents[1] / "src" / "postsift" / "data"


def read_tsv(path: Path) -> list[dict[str, str]]:
    """Plain TSV reader, independent of the package's csv-based loader."""
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split("\t")
    return [dict(zip(header, line.split("\t"))) for line in lines[1:] if line]
