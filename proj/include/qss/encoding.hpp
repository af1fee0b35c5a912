#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qss {

/// Codebook that classically encodes a secret bit into a multi-qubit product
/// state. cells[basis_bit][secret_bit] is the set of share patterns (text
/// bitstrings, share 0 first) that encode that secret in that basis. Cells
/// may hold invalid data after loading from JSON; validate() reports every
/// violation instead of throwing.
struct EncodingTable {
    std::string name;
    int num_shares = 2;
    std::vector<std::string> cells[2][2];

    const std::vector<std::string>& cell(int basis_bit, int secret_bit) const {
        return cells[basis_bit & 1][secret_bit & 1];
    }
};

/// The n-of-n XOR rule: cell (basis, s) holds exactly the patterns whose bit
/// parity is s, in both bases. num_shares >= 2.
EncodingTable parity_table(int num_shares);

/// Draws a pattern uniformly from the matching cell using one uniform real.
std::string encode(const EncodingTable& table, int basis_bit, int secret_bit,
                   double rand);

/// Secret bit of the cell containing `pattern`, or nullopt when the pattern
/// belongs to neither cell (a corrupted round, reported by diagnostics).
std::optional<int> decode(const EncodingTable& table, int basis_bit,
                          const std::string& pattern);

/// Empty iff all table invariants hold: num_shares >= 2, every pattern has
/// length num_shares and only 0/1 characters, cells are non-empty, per-basis
/// cells are disjoint and their union has at most 2^num_shares patterns.
std::vector<std::string> validate(const EncodingTable& table);

std::vector<int> pattern_bits(const std::string& pattern);
int pattern_parity(const std::string& pattern);

// JSON document form:
// {"name": str, "num_shares": int,
//  "cells": {"Z0": [bitstrings], "Z1": [...], "X0": [...], "X1": [...]}}
EncodingTable table_from_json(const std::string& json_text);
std::string table_to_json(const EncodingTable& table);
EncodingTable load_table_file(const std::string& path);

}  // namespace qss
