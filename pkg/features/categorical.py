"""Categorical block: one-hot gender and genre vocabulary lookup"""

from typing import Dict, Iterable

import numpy as np

from config.settings import GENDERS, UNKNOWN_GENRE_INDEX
from utils.errors import DomainError


def gender_one_hot(gender: str) -> np.ndarray:
    if gender not in GENDERS:
        raise DomainError(f"unknown gender '{gender}', expected one of {GENDERS}")
    vector = np.zeros(len(GENDERS))
    vector[GENDERS.index(gender)] = 1.0
    return vector


def build_genre_vocabulary(genres: Iterable[str]) -> Dict[str, int]:
    """Sorted genre names mapped to 1..k; index 0 is the unknown bucket"""
    return {genre: index for index, genre in enumerate(sorted(set(genres)), start=1)}


def genre_index(genre: str, vocab: Dict[str, int]) -> int:
    return vocab.get(genre, UNKNOWN_GENRE_INDEX)


def encode_categorical(gender: str, genre: str, vocab: Dict[str, int], embedding_table: np.ndarray) -> np.ndarray:
    """Gender one-hot followed by the genre's embedding row"""
    index = genre_index(genre, vocab)
    if index >= embedding_table.shape[0]:
        raise DomainError(f"genre index {index} outside an embedding table of {embedding_table.shape[0]} rows")
    return np.concatenate([gender_one_hot(gender), embedding_table[index]])
