"""Hypothesis property tests for the tokenizer round-trip guarantees."""

import string

from hypothesis import given, settings
from hypothesis import strategies as st

from mtlab import tokenizer as tk

MODEL = tk.train_bpe_texts(
    ["the winter hotel offers a restaurant with wifi and garden views",
     "guests can walk to the station in ten minutes",
     "ein haus am see mit blick auf den garten"] * 4,
    120,
)

words = st.text(alphabet=string.ascii_letters + "äöüß", min_size=1, max_size=10)
punctuation = st.sampled_from([",", ".", "!", "?", ";", ":", "-", "(", ")", '"'])
numbers = st.integers(min_value=0, max_value=99999).map(str)
placeholders = st.builds(tk.format_placeholder, st.sampled_from(["DIST", "DUR", "TIME", "DATE"]),
                         st.integers(min_value=0, max_value=9))
chunk = st.one_of(words, numbers, placeholders,
                  st.tuples(words, punctuation).map("".join),
                  st.tuples(numbers, punctuation, words).map("".join))
sentences = st.lists(chunk, min_size=0, max_size=12).map(" ".join)


@given(sentences)
@settings(max_examples=300, deadline=None)
def test_round_trip_on_sentence_like_text(sentence):
    assert tk.detokenize(tk.tokenize(MODEL, sentence)) == sentence


@given(st.text(max_size=60))
@settings(max_examples=300, deadline=None)
def test_round_trip_on_arbitrary_text(text):
    assert tk.detokenize(tk.tokenize(MODEL, text)) == text


@given(sentences)
@settings(max_examples=150, deadline=None)
def test_rendered_form_parses_back(sentence):
    ts = tk.tokenize(MODEL, sentence)
    assert tk.parse_tokens(tk.render_tokens(ts)) == ts


@given(st.text(alphabet=string.ascii_letters, min_size=1, max_size=12))
@settings(max_examples=200, deadline=None)
def test_piece_sequences_case_invariant(word):
    lower = tk.tokenize(MODEL, word.lower()).pieces()
    upper = tk.tokenize(MODEL, word.upper()).pieces()
    assert lower == upper
