#pragma once

// Built-in block isomorphisms between an ordinal carrier and a product,
// exposed to MapExpr as macro rules. Each is a bijection with exact image
// and preimage transforms on the representable set algebra.
//
//   kBlockIso(alpha):  w^{alpha+1}+1  ->  omega x (w^alpha + 1)
//     block (w^alpha*i, w^alpha*(i+1)] goes to row i rebased to offsets;
//     within a block the top offset w^alpha moves to column 0, offset w
//     moves to the column top, finite offsets k >= 1 shift down to cover w,
//     everything else is kept. Row 0 additionally absorbs the two leftover
//     points: 0 stays at (0,0) via the closed block [0, w^alpha], and the
//     domain top goes to (0,1) with finite offsets >= 1 shifted up by one.
//
//   kConvFin2:  w^2+1  ->  omega x omega
//     block (w*i, w*(i+1)] to row i with w*(i+1) at column 0 and w*i+m at
//     column m; row 0 absorbs {0, w, w^2} ahead of its shifted finite part.
//
//   kConvBI:  w^3+1  ->  omega x (omega x omega)
//     kBlockIso(2) followed by kConvFin2 on every column space.

#include "ordlab/map_expr.hpp"

namespace ordlab {

inline constexpr int kMacroBlockIso = 1;
inline constexpr int kMacroConvFin2 = 2;
inline constexpr int kMacroConvBI = 3;

MapExpr make_block_iso(const Ordinal& alpha);   // w^{alpha+1}+1 -> omega x (w^alpha+1)
MapExpr make_conv_fin2();                       // w^2+1 -> omega x omega
MapExpr make_conv_bi();                         // w^3+1 -> omega x (omega x omega)
MapExpr inverted(const MapExpr& macro_map);

Point block_iso_apply(const MapExpr& f, const MacroR& r, const Point& x);
SetExpr block_iso_image(const MapExpr& f, const MacroR& r, const SetExpr& s);
SetExpr block_iso_preimage(const MapExpr& f, const MacroR& r, const SetExpr& t);

}  // namespace ordlab
