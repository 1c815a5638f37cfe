# distutils: language = c++
# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled backoff scoring kernel.

Grams are packed into 64-bit keys: token ids start at 1 and occupy ``bits``
bits each, least significant slot first. Ids never being 0 keeps keys of
different gram lengths distinct. The Python-side encoder guarantees
``bits * order <= 64``.

The float additions mirror the pure-Python kernel exactly, per utterance,
so both backends return bit-identical totals.
"""

from cython.operator cimport dereference as deref
from cpython.dict cimport PyDict_GetItem
from cpython.ref cimport PyObject
from libc.stdint cimport uint64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector


cdef class PackedModel:
    cdef unordered_map[uint64_t, double] probs
    cdef unordered_map[uint64_t, double] bows
    cdef vector[double] emis
    cdef int order
    cdef int bits
    cdef uint64_t start_id
    cdef uint64_t end_id
    cdef uint64_t unk_id

    def __init__(self, int order, int bits, dict probs10, dict bows10,
                 list emis10, start_id, end_id, unk_id):
        cdef uint64_t key
        cdef double val
        self.order = order
        self.bits = bits
        self.start_id = start_id
        self.end_id = end_id
        self.unk_id = unk_id
        self.probs.reserve(len(probs10) * 2)
        self.bows.reserve(len(bows10) * 2)
        for pykey, pyval in probs10.items():
            key = pykey
            val = pyval
            self.probs[key] = val
        for pykey, pyval in bows10.items():
            key = pykey
            val = pyval
            self.bows[key] = val
        self.emis.resize(len(emis10))
        for i, pyval in enumerate(emis10):
            self.emis[i] = pyval

    cdef double _score(self, vector[uint64_t]& cid, bint emission) except? -1e300:
        cdef int n = cid.size()
        cdef int i, j, start
        cdef int order = self.order
        cdef int bits = self.bits
        cdef double total = 0.0
        cdef double acc
        cdef uint64_t key
        cdef unordered_map[uint64_t, double].iterator it
        for i in range(order - 1, n):
            acc = 0.0
            start = i - order + 1
            while True:
                key = 0
                for j in range(start, i + 1):
                    key |= cid[j] << (bits * (j - start))
                it = self.probs.find(key)
                if it != self.probs.end():
                    total += acc + deref(it).second
                    break
                if start == i:
                    raise KeyError(<object>cid[i])
                key = 0
                for j in range(start, i):
                    key |= cid[j] << (bits * (j - start))
                it = self.bows.find(key)
                if it != self.bows.end():
                    acc += deref(it).second
                start += 1
            if emission:
                total += self.emis[<size_t>cid[i]]
        return total

    cdef int _encode(self, list tokens, dict idmap, vector[uint64_t]& cid) except -1:
        """Pad and intern one utterance; returns the oov count."""
        cdef int n = len(tokens)
        cdef int lead = self.order - 1
        cdef int i
        cdef int oov = 0
        cdef PyObject* hit
        cid.resize(lead + n + 1)
        for i in range(lead):
            cid[i] = self.start_id
        for i in range(n):
            hit = PyDict_GetItem(idmap, tokens[i])
            if hit is NULL:
                cid[lead + i] = self.unk_id
                oov += 1
            else:
                cid[lead + i] = <uint64_t><object>hit
        cid[lead + n] = self.end_id
        return oov

    def score_padded(self, list ids, bint emission):
        """Low-level entry: pre-padded, pre-interned token ids."""
        cdef vector[uint64_t] cid
        cdef int i
        cid.resize(len(ids))
        for i in range(len(ids)):
            cid[i] = ids[i]
        return self._score(cid, emission)

    def score_utterance(self, list tokens, dict idmap, bint emission):
        """(log10 total, oov count) for one unpadded utterance."""
        cdef vector[uint64_t] cid
        cdef int oov = self._encode(tokens, idmap, cid)
        return self._score(cid, emission), oov

    def score_nus(self, list nus, dict idmap, bint emission):
        """(log10 total, scored tokens, oov) over a corpus, utterance order."""
        cdef double total = 0.0
        cdef long tokens = 0
        cdef int oov = 0
        cdef vector[uint64_t] cid
        cdef list utterance
        for utterance in nus:
            oov += self._encode(utterance, idmap, cid)
            total += self._score(cid, emission)
            tokens += len(utterance) + 1
        return total, tokens, oov
