#include "cohepow/machine.hpp"

#include <unordered_map>

namespace cohepow {

uint64_t encode_instr(const Instr& ins) {
  switch (ins.op) {
    case Op::Inc:
      return pair(0, ins.reg);
    case Op::Djz:
      return pair(1, pair(ins.reg, ins.target));
    case Op::Halt:
      return pair(2, 0);
  }
  return pair(2, 0);
}

Instr decode_instr(uint64_t z) {
  uint64_t opcode = left(z) % 3;
  uint64_t operand = right(z);
  Instr ins;
  switch (opcode) {
    case 0:
      ins.op = Op::Inc;
      ins.reg = operand;
      break;
    case 1:
      ins.op = Op::Djz;
      ins.reg = left(operand);
      ins.target = right(operand);
      break;
    default:
      ins.op = Op::Halt;
      break;
  }
  return ins;
}

uint64_t Program::encode() const {
  std::vector<uint64_t> codes;
  codes.reserve(code_.size());
  for (const auto& ins : code_) codes.push_back(encode_instr(ins));
  return encode_list(codes);
}

Program Program::decode(uint64_t z) {
  std::vector<Instr> code;
  for (uint64_t c : decode_list(z)) code.push_back(decode_instr(c));
  return Program(std::move(code));
}

namespace {
// Registers below the dense cap live in a vector; decoded programs can name
// arbitrary register numbers, so the rest spill into a map.
constexpr uint64_t kDenseRegs = 256;

struct RegFile {
  std::vector<uint64_t> dense;
  std::unordered_map<uint64_t, uint64_t> sparse;

  uint64_t get(uint64_t r) const {
    if (r < kDenseRegs) return r < dense.size() ? dense[r] : 0;
    auto it = sparse.find(r);
    return it == sparse.end() ? 0 : it->second;
  }
  void set(uint64_t r, uint64_t v) {
    if (r < kDenseRegs) {
      if (r >= dense.size()) dense.resize(r + 1, 0);
      dense[r] = v;
    } else {
      sparse[r] = v;
    }
  }
};
}  // namespace

RunResult Program::run(uint64_t input, uint64_t budget) const {
  RegFile regs;
  regs.set(0, input);
  uint64_t pc = 0;
  uint64_t used = 0;
  while (true) {
    bool at_halt = pc >= code_.size() || code_[pc].op == Op::Halt;
    if (used + 1 > budget) return {false, 0, budget};
    ++used;
    if (at_halt) return {true, regs.get(0), used};
    const Instr& ins = code_[pc];
    if (ins.op == Op::Inc) {
      regs.set(ins.reg, regs.get(ins.reg) + 1);
      ++pc;
    } else {  // Djz
      uint64_t v = regs.get(ins.reg);
      if (v == 0) {
        pc = ins.target;
      } else {
        regs.set(ins.reg, v - 1);
        ++pc;
      }
    }
  }
}

std::string Program::disassemble() const {
  std::string out;
  for (size_t i = 0; i < code_.size(); ++i) {
    out += std::to_string(i) + ": ";
    const Instr& ins = code_[i];
    switch (ins.op) {
      case Op::Inc:
        out += "inc r" + std::to_string(ins.reg);
        break;
      case Op::Djz:
        out += "djz r" + std::to_string(ins.reg) + " -> " + std::to_string(ins.target);
        break;
      case Op::Halt:
        out += "halt";
        break;
    }
    out += "\n";
  }
  if (code_.empty()) out = "(empty)\n";
  return out;
}

namespace programs {

// Register 2 is kept at zero throughout and serves as the goto scratch.
static Instr inc(uint64_t r) { return {Op::Inc, r, 0}; }
static Instr djz(uint64_t r, uint64_t t) { return {Op::Djz, r, t}; }
static Instr halt() { return {Op::Halt, 0, 0}; }

Program empty() { return Program({}, "empty"); }

Program halt_only() { return Program({halt()}, "halt_only"); }

Program successor() { return Program({inc(0)}, "successor"); }

Program successor_alt() { return Program({inc(0), halt()}, "successor_alt"); }

Program add_k(uint64_t k) {
  std::vector<Instr> code;
  for (uint64_t i = 0; i < k; ++i) code.push_back(inc(0));
  return Program(std::move(code), "add_" + std::to_string(k));
}

Program const_k(uint64_t k) {
  // 0: drain r0; then k increments.
  std::vector<Instr> code = {djz(0, 2), djz(2, 0)};
  for (uint64_t i = 0; i < k; ++i) code.push_back(inc(0));
  return Program(std::move(code), "const_" + std::to_string(k));
}

Program times_k(uint64_t k) {
  // Move r0 to r1, then append k increments of r0 per unit of r1. The exit
  // jump lands one past the loop-back so appended suffixes keep running.
  std::vector<Instr> code = {djz(0, 3), inc(1), djz(2, 0), djz(1, static_cast<uint64_t>(5 + k))};
  for (uint64_t i = 0; i < k; ++i) code.push_back(inc(0));
  code.push_back(djz(2, 3));
  return Program(std::move(code), "times_" + std::to_string(k));
}

Program doubling() {
  Program p = times_k(2);
  return Program(p.code(), "doubling");
}

Program double_plus2() {
  std::vector<Instr> code = times_k(2).code();
  code.push_back(inc(0));
  code.push_back(inc(0));
  return Program(std::move(code), "double_plus2");
}

Program mod2() {
  // Drain r0 two at a time; land on 0 or 1.
  return Program({djz(0, 3), djz(0, 4), djz(2, 0), halt(), inc(0)}, "mod2");
}

Program monus_k(uint64_t k) {
  std::vector<Instr> code;
  for (uint64_t i = 0; i < k; ++i) code.push_back(djz(0, k));
  return Program(std::move(code), "monus_" + std::to_string(k));
}

Program diverge() { return Program({djz(2, 0)}, "diverge"); }

}  // namespace programs

}  // namespace cohepow
