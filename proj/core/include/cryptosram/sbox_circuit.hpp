#pragma once

#include "cryptosram/circuit.hpp"

namespace csram {

// AES S-box as a 128-gate AND/XOR/XNOR circuit (inputs U0..U7, U0 the MSB;
// outputs S0..S7, S0 the MSB).
const Netlist& forward_sbox_netlist();
// Inverse S-box (inputs P0..P7, outputs Q0..Q7, indexed by bit), 160 gates.
const Netlist& inverse_sbox_netlist();

}  // namespace csram
