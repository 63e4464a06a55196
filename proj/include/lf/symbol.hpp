#ifndef LF_SYMBOL_HPP
#define LF_SYMBOL_HPP

#include <string>
#include <tuple>

namespace lf {

// Declaration order fixes the canonical sort: parameters print before time,
// coordinates, and velocities ("m*v1*exp(lambda*t)").
enum class SymbolKind { Param, Time, Coord, Vel, Accel };

// A variable of the mechanical problem: t, q^i, v^i (= dq^i/dt), a^i
// (= d^2 q^i/dt^2), or a named constant parameter. Indices are 1-based.
struct Symbol {
    SymbolKind kind = SymbolKind::Time;
    int index = 0;          // Coord/Vel/Accel only
    std::string name;       // Param only

    static Symbol time() { return {SymbolKind::Time, 0, {}}; }
    static Symbol coord(int i) { return {SymbolKind::Coord, i, {}}; }
    static Symbol vel(int i) { return {SymbolKind::Vel, i, {}}; }
    static Symbol accel(int i) { return {SymbolKind::Accel, i, {}}; }
    static Symbol param(std::string n) { return {SymbolKind::Param, 0, std::move(n)}; }

    std::string str() const {
        switch (kind) {
            case SymbolKind::Time: return "t";
            case SymbolKind::Coord: return "q" + std::to_string(index);
            case SymbolKind::Vel: return "v" + std::to_string(index);
            case SymbolKind::Accel: return "a" + std::to_string(index);
            case SymbolKind::Param: return name;
        }
        return {};
    }

    friend bool operator==(const Symbol& a, const Symbol& b) {
        return a.kind == b.kind && a.index == b.index && a.name == b.name;
    }
    friend bool operator!=(const Symbol& a, const Symbol& b) { return !(a == b); }
    friend bool operator<(const Symbol& a, const Symbol& b) {
        return std::tie(a.kind, a.index, a.name) < std::tie(b.kind, b.index, b.name);
    }
};

}  // namespace lf

#endif
