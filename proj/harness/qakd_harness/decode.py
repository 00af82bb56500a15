import numpy as np


def _softmax(x):
    x = np.asarray(x, dtype=np.float64)
    e = np.exp(x - x.max())
    return e / e.sum()


def top_k_spans(start_logits, end_logits, top_k=5, max_answer_len=30):
    """Best spans by p_start * p_end with start <= end and length <= max_answer_len.

    Returns (start, end, prob) triples sorted by descending prob; ties keep the
    earlier start, then the earlier end.
    """
    ps, pe = _softmax(start_logits), _softmax(end_logits)
    n = min(len(ps), len(pe))
    spans = []
    for i in range(n):
        hi = min(n, i + max_answer_len)
        probs = ps[i] * pe[i:hi]
        spans.extend((float(p), i, i + j) for j, p in enumerate(probs))
    spans.sort(key=lambda s: (-s[0], s[1], s[2]))
    return [(s, e, p) for p, s, e in spans[:top_k]]


def prediction_record(qid, tokens, start_logits, end_logits, top_k=5, max_answer_len=30):
    """predictions.jsonl record; answer text is the space-joined student tokens."""
    cands = []
    for s, e, p in top_k_spans(start_logits, end_logits, top_k, max_answer_len):
        text = " ".join(t["text"] for t in tokens[s:e + 1]) if tokens else ""
        cands.append({"text": text, "prob": p, "start": s, "end": e})
    return {"id": qid, "candidates": cands}
