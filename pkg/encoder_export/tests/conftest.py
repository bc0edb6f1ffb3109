from pathlib import Path

import pytest
import torch
from transformers import BertConfig, BertModel, BertTokenizer

VOCAB = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
         "the", "flood", "water", "fire", "storm", "bridge", "closed",
         "crews", "shelter", "open", "rising", "fast", "omg", "lol",
         "song", "coffee", "##s", "##ing", "a", "in", "is", "near"]

HIDDEN_SIZE = 32


@pytest.fixture(scope="session")
def hidden_size() -> int:
    return HIDDEN_SIZE


@pytest.fixture(scope="session")
def tiny_encoder_dir(tmp_path_factory) -> Path:
    """Randomly initialized miniature encoder saved to disk.

    Exercises the whole export path (load from a local directory,
    tokenize, truncate, batch, extract [CLS]) without downloading
    pretrained weights.
    """
    out = tmp_path_factory.mktemp("tiny-encoder")
    tokenizer = BertTokenizer(vocab={t: i for i, t in enumerate(VOCAB)},
                              do_lower_case=True)
    tokenizer.save_pretrained(out)
    config = BertConfig(
        vocab_size=len(VOCAB), hidden_size=HIDDEN_SIZE, num_hidden_layers=2,
        num_attention_heads=2, intermediate_size=64,
        max_position_embeddings=128)
    torch.manual_seed(1234)
    BertModel(config).save_pretrained(out)
    return out


@pytest.fixture()
def dataset_file(tmp_path) -> Path:
    rows = [
        "id\ttext\tlabel",
        "r1\tflood water rising fast near the bridge\ton-topic",
        "r2\tomg this song lol\toff-topic",
        "r3\tflood water rising fast near the bridge\ton-topic",  # dup text
        "r4\t\toff-topic",  # missing text: skipped with a warning
        "r5\tcrews open the shelter\ton-topic",
        "r6\tstorm fire water " + "flood " * 120 + "closed\ton-topic",  # truncated
    ]
    path = tmp_path / "posts.tsv"
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path
