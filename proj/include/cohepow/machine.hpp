#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cohepow/pairing.hpp"

namespace cohepow {

// Unbounded-register machine. Three opcodes; one fetch costs one step, and the
// fetch that observes the halt state is charged too, so a run that executes k
// instructions halts within budget s iff k + 1 <= s.
enum class Op : uint8_t { Inc, Djz, Halt };

struct Instr {
  Op op = Op::Halt;
  uint64_t reg = 0;     // Inc, Djz
  uint64_t target = 0;  // Djz: jump target when the register is zero

  bool operator==(const Instr& o) const {
    return op == o.op && reg == o.reg && target == o.target;
  }
};

struct RunResult {
  bool halted = false;
  uint64_t value = 0;
  uint64_t steps = 0;  // executed instructions + 1 when halted; budget otherwise
};

// Numbering of single instructions: Inc r = pair(0, r), Djz r j = pair(1, pair(r, j)),
// Halt = pair(2, 0). Decoding reduces the opcode field mod 3 so every natural
// denotes an instruction.
uint64_t encode_instr(const Instr& ins);
Instr decode_instr(uint64_t z);

class Program {
 public:
  Program() = default;
  explicit Program(std::vector<Instr> code, std::string name = "")
      : code_(std::move(code)), name_(std::move(name)) {}

  const std::vector<Instr>& code() const { return code_; }
  const std::string& name() const { return name_; }
  size_t size() const { return code_.size(); }

  // List code of the instruction numbers; a bijection between N and programs.
  uint64_t encode() const;
  static Program decode(uint64_t z);

  // Input in register 0; output is register 0 at the halting fetch.
  RunResult run(uint64_t input, uint64_t budget) const;

  std::string disassemble() const;

 private:
  std::vector<Instr> code_;
  std::string name_;
};

// Hand-assembled programs used as oracles and as the interpreter prelude.
namespace programs {
Program empty();                    // identity, cost 1
Program halt_only();                // identity, cost 1 (explicit Halt)
Program successor();                // n+1, [Inc 0]
Program successor_alt();            // n+1 assembled differently ([Inc 0, Halt])
Program add_k(uint64_t k);          // n+k
Program const_k(uint64_t k);        // k
Program double_plus2();             // 2n+2
Program doubling();                 // 2n
Program times_k(uint64_t k);        // k*n
Program mod2();                     // n mod 2
Program monus_k(uint64_t k);        // max(n-k, 0)
Program diverge();                  // loops on every input
}  // namespace programs

}  // namespace cohepow
