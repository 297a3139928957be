#include "nsbox/coding.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>

namespace nsbox {

namespace {

int parity64(uint64_t x) { return std::popcount(x) & 1; }

// Row-reduce a list of GF(2) row vectors; returns rank, rows modified in place.
int row_reduce(std::vector<uint64_t>& rows, int width) {
    int rank = 0;
    for (int col = 0; col < width && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        for (int i = rank; i < static_cast<int>(rows.size()); ++i) {
            if ((rows[static_cast<size_t>(i)] >> col) & 1) { pivot = i; break; }
        }
        if (pivot < 0) continue;
        std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(pivot)]);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i != rank && ((rows[static_cast<size_t>(i)] >> col) & 1))
                rows[static_cast<size_t>(i)] ^= rows[static_cast<size_t>(rank)];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

uint64_t syndrome(const LinearCode& code, uint64_t x) {
    if (code.n < 64 && (x >> code.n) != 0) throw CodingError("syndrome: word longer than block length");
    uint64_t s = 0;
    for (size_t i = 0; i < code.h.size(); ++i) {
        s |= static_cast<uint64_t>(parity64(code.h[i] & x)) << i;
    }
    return s;
}

std::vector<uint64_t> code_generator(const LinearCode& code) {
    // Solve H g = 0. Reduce H, identify pivot columns, read off free-column
    // basis vectors.
    std::vector<uint64_t> rows = code.h;
    int m = static_cast<int>(rows.size());
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < code.n && rank < m; ++col) {
        int pivot = -1;
        for (int i = rank; i < m; ++i) {
            if ((rows[static_cast<size_t>(i)] >> col) & 1) { pivot = i; break; }
        }
        if (pivot < 0) continue;
        std::swap(rows[static_cast<size_t>(rank)], rows[static_cast<size_t>(pivot)]);
        for (int i = 0; i < m; ++i) {
            if (i != rank && ((rows[static_cast<size_t>(i)] >> col) & 1))
                rows[static_cast<size_t>(i)] ^= rows[static_cast<size_t>(rank)];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(static_cast<size_t>(code.n), false);
    for (int c : pivot_col) is_pivot[static_cast<size_t>(c)] = true;
    std::vector<uint64_t> gen;
    for (int free = 0; free < code.n; ++free) {
        if (is_pivot[static_cast<size_t>(free)]) continue;
        uint64_t g = 1ULL << free;
        for (int r = 0; r < rank; ++r) {
            // Row r forces the pivot bit to match the free columns it touches.
            if ((rows[static_cast<size_t>(r)] >> free) & 1) g |= 1ULL << pivot_col[static_cast<size_t>(r)];
        }
        gen.push_back(g);
    }
    return gen;
}

int min_distance_exact(const LinearCode& code) {
    auto gen = code_generator(code);
    int k = static_cast<int>(gen.size());
    if (k > 24) throw CodingError("min_distance_exact: dimension too large for enumeration");
    if (k == 0) return code.n + 1;  // no nonzero codewords; conventionally "infinite"
    int best = code.n + 1;
    for (uint64_t msg = 1; msg < (1ULL << k); ++msg) {
        uint64_t cw = 0;
        uint64_t m = msg;
        while (m) {
            int j = std::countr_zero(m);
            cw ^= gen[static_cast<size_t>(j)];
            m &= m - 1;
        }
        best = std::min(best, std::popcount(cw));
    }
    return best;
}

LinearCode sample_code(int n, const Rat& rate, int d_min, SplitRng& rng, int max_retries) {
    if (n < 1 || n > 64) throw CodingError("sample_code: n must be in [1,64]");
    Rat kn = rate * n;
    if (kn.get_den() != 1) throw CodingError("sample_code: R*n must be an integer");
    long k = kn.get_num().get_si();
    if (k <= 0 || k >= n) throw CodingError("sample_code: need 0 < R < 1");
    if (d_min > n) throw CodingError("sample_code: d_min exceeds block length");
    // Singleton: d <= n - k + 1.
    if (d_min > n - k + 1)
        throw RetriesExhausted("sample_code: d_min violates the Singleton bound", n - static_cast<int>(k) + 1);
    int m = n - static_cast<int>(k);
    uint64_t mask = n == 64 ? ~0ULL : ((1ULL << n) - 1);
    int best = 0;
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        LinearCode c;
        c.n = n;
        c.k = static_cast<int>(k);
        c.h.resize(static_cast<size_t>(m));
        for (auto& row : c.h) row = rng.next_u64() & mask;
        std::vector<uint64_t> copy = c.h;
        if (row_reduce(copy, n) != m) continue;  // not full row rank
        if (c.k <= 24) {
            int d = min_distance_exact(c);
            best = std::max(best, d);
            if (d >= d_min) {
                c.dist_status = LinearCode::DistStatus::Exact;
                c.distance = d;
                return c;
            }
        } else {
            // Bounded-weight search: any codeword of weight < d_min disqualifies.
            bool ok = true;
            std::vector<uint64_t> idx;
            std::function<bool(uint64_t, int, int)> rec = [&](uint64_t word, int next, int left) {
                if (left == 0) return word != 0 && syndrome(c, word) == 0;
                for (int i = next; i <= n - left; ++i) {
                    if (rec(word | (1ULL << i), i + 1, left - 1)) return true;
                }
                return false;
            };
            for (int wgt = 1; wgt < d_min && ok; ++wgt) {
                if (rec(0, 0, wgt)) ok = false;
            }
            if (ok) {
                c.dist_status = LinearCode::DistStatus::LowerBounded;
                c.distance = d_min;
                return c;
            }
        }
    }
    throw RetriesExhausted("sample_code: no code met d_min within retry budget", best);
}

std::string serialize_code(const LinearCode& code) {
    std::ostringstream out;
    out << "code " << code.n << " " << code.k << "\n";
    for (uint64_t row : code.h) {
        for (int i = 0; i < code.n; ++i) out << ((row >> i) & 1);
        out << "\n";
    }
    return out.str();
}

LinearCode parse_code(const std::string& text) {
    std::istringstream in(text);
    std::string tag;
    LinearCode c;
    if (!(in >> tag >> c.n >> c.k) || tag != "code" || c.n < 1 || c.n > 64 || c.k < 0 || c.k > c.n)
        throw CodingError("parse_code: bad header");
    c.h.resize(static_cast<size_t>(c.n - c.k));
    for (auto& row : c.h) {
        std::string bits;
        if (!(in >> bits) || static_cast<int>(bits.size()) != c.n)
            throw CodingError("parse_code: bad parity row");
        row = 0;
        for (int i = 0; i < c.n; ++i) {
            if (bits[static_cast<size_t>(i)] == '1') row |= 1ULL << i;
            else if (bits[static_cast<size_t>(i)] != '0') throw CodingError("parse_code: bad bit");
        }
    }
    std::vector<uint64_t> copy = c.h;
    if (row_reduce(copy, c.n) != c.n - c.k) throw CodingError("parse_code: parity matrix not full rank");
    c.dist_status = LinearCode::DistStatus::Unverified;
    return c;
}

ToeplitzSeed ToeplitzSeed::random(int n, int l, SplitRng& rng) {
    ToeplitzSeed s;
    s.n = n;
    s.l = l;
    int nbits = n + l - 1;
    s.bits.assign(static_cast<size_t>((nbits + 63) / 64), 0);
    for (int t = 0; t < nbits; ++t) {
        if (rng.bit()) s.bits[static_cast<size_t>(t) / 64] |= 1ULL << (t % 64);
    }
    return s;
}

ToeplitzSeed ToeplitzSeed::zero(int n, int l) {
    ToeplitzSeed s;
    s.n = n;
    s.l = l;
    s.bits.assign(static_cast<size_t>((n + l - 1 + 63) / 64), 0);
    return s;
}

std::string ToeplitzSeed::to_hex() const {
    std::ostringstream out;
    int nbits = n + l - 1;
    for (int t = 0; t < nbits; t += 4) {
        int nib = 0;
        for (int j = 0; j < 4 && t + j < nbits; ++j) nib |= (bit(t + j) ? 1 : 0) << j;
        out << "0123456789abcdef"[nib];
    }
    return out.str();
}

ToeplitzSeed ToeplitzSeed::from_hex(int n, int l, const std::string& hex) {
    ToeplitzSeed s = zero(n, l);
    int nbits = n + l - 1;
    for (int t = 0; t < nbits; ++t) {
        size_t idx = static_cast<size_t>(t / 4);
        if (idx >= hex.size()) throw CodingError("seed hex too short");
        char c = hex[idx];
        int nib = c >= '0' && c <= '9' ? c - '0' : (c >= 'a' && c <= 'f' ? c - 'a' + 10 : -1);
        if (nib < 0) throw CodingError("bad seed hex");
        if ((nib >> (t % 4)) & 1) s.bits[static_cast<size_t>(t) / 64] |= 1ULL << (t % 64);
    }
    return s;
}

uint64_t toeplitz_ext(const ToeplitzSeed& seed, uint64_t x) {
    if (seed.n < 64 && (x >> seed.n) != 0) throw CodingError("ext: input longer than declared n");
    uint64_t out = 0;
    for (int j = 0; j < seed.l; ++j) {
        // Row j of the Toeplitz matrix is seed bits l-1-j .. l-1-j+n-1.
        uint64_t row = 0;
        for (int i = 0; i < seed.n; ++i) {
            if (seed.bit(seed.l - 1 - j + i)) row |= 1ULL << i;
        }
        out |= static_cast<uint64_t>(parity64(row & x)) << j;
    }
    return out;
}

Rat verify_two_universal(int n, int l) {
    if (n < 1 || n > 12 || l < 1 || l > 4)
        throw CodingError("verify_two_universal: exhaustive check limited to n <= 12, l <= 4");
    int nbits = n + l - 1;
    uint64_t seed_count = 1ULL << nbits;
    uint64_t worst = 0;
    for (uint64_t d = 1; d < (1ULL << n); ++d) {
        uint64_t collisions = 0;
        for (uint64_t s = 0; s < seed_count; ++s) {
            // Collision iff T(d) = 0 for this seed.
            uint64_t out = 0;
            for (int j = 0; j < l && out == 0; ++j) {
                uint64_t row = 0;
                for (int i = 0; i < n; ++i) {
                    if ((s >> (l - 1 - j + i)) & 1) row |= 1ULL << i;
                }
                out |= static_cast<uint64_t>(parity64(row & d)) << j;
            }
            if (out == 0) ++collisions;
        }
        worst = std::max(worst, collisions);
    }
    return Rat(Int(static_cast<unsigned long>(worst)), Int(static_cast<unsigned long>(seed_count)));
}

Rat leftover_distance(const std::vector<std::pair<uint64_t, Rat>>& source, int n, int l) {
    if (n < 1 || n > 16) throw CodingError("leftover_distance: n <= 16 required");
    if (l < 1 || l > 16) throw CodingError("leftover_distance: l out of range");
    int nbits = n + l - 1;
    if (nbits > 24) throw CodingError("leftover_distance: seed space too large");
    uint64_t seed_count = 1ULL << nbits;
    uint64_t range = 1ULL << l;
    Rat uniform(1, static_cast<unsigned long>(range));
    Rat acc = 0;
    std::vector<Rat> py(static_cast<size_t>(range));
    for (uint64_t s = 0; s < seed_count; ++s) {
        // Materialize the l Toeplitz rows for this seed.
        uint64_t rows[16];
        for (int j = 0; j < l; ++j) {
            uint64_t row = 0;
            for (int i = 0; i < n; ++i) {
                if ((s >> (l - 1 - j + i)) & 1) row |= 1ULL << i;
            }
            rows[j] = row;
        }
        for (auto& q : py) q = 0;
        for (const auto& [xval, prob] : source) {
            uint64_t out = 0;
            for (int j = 0; j < l; ++j) out |= static_cast<uint64_t>(parity64(rows[j] & xval)) << j;
            py[static_cast<size_t>(out)] += prob;
        }
        for (uint64_t yv = 0; yv < range; ++yv) {
            acc += rat_abs(py[static_cast<size_t>(yv)] - uniform);
        }
    }
    Rat dist = acc / (2 * Rat(static_cast<unsigned long>(seed_count)));
    return dist;
}

}  // namespace nsbox
