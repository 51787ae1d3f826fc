/* The copyright in this software is being made available under the BSD
 * License, included below. This software may be subject to other third party
 * and contributor rights, including patent rights, and no such rights are
 * granted under this license.
 *
 * Copyright (c) 2026, The cupart Authors
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 *  * Redistributions of source code must retain the above copyright notice,
 *    this list of conditions and the following disclaimer.
 *  * Redistributions in binary form must reproduce the above copyright notice,
 *    this list of conditions and the following disclaimer in the documentation
 *    and/or other materials provided with the distribution.
 *  * Neither the name of the copyright holder nor the names of its contributors
 *    may be used to endorse or promote products derived from this software
 *    without specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS
 * BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF
 * THE POSSIBILITY OF SUCH DAMAGE.
 */

/** \file     RdoOracle.hpp
    \brief    simplified intra rate-distortion model and exhaustive quad-tree split labeling
*/

#pragma once

#include "cupart/MediaIo.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cupart
{

struct QpConfig
{
  int qp = 32;
};

inline constexpr std::array<int, 4> kTestQps = { 22, 27, 32, 37 };

constexpr uint64_t kHeaderBits    = 8;
constexpr uint64_t kSplitFlagBits = 1;

/// 0.57 * 2^((qp - 12) / 3)
double lambdaForQp( int qp );

/// Quantizer step, 2^((qp - 4) / 6).
double quantStep( int qp );

/// Dead-zone rounding offset of the coefficient quantizer (intra).
constexpr double kQuantRoundingOffset = 1.0 / 3.0;

/// Largest transform unit; bigger CUs are coded as a grid of these.
constexpr int kMaxTuSize = 32;

/// cost = distortion + lambda * rate. Distortion (rounded per CU) and rate are integral so
/// sums of costs are exact and comparisons between alternatives are order independent.
struct RdCost
{
  uint64_t distortion = 0;
  uint64_t rate       = 0;
  double   lambda     = 0.0;

  double cost() const { return static_cast<double>( distortion ) + lambda * static_cast<double>( rate ); }

  RdCost& operator+=( const RdCost& other );
};

RdCost operator+( RdCost a, const RdCost& b );

enum class IntraMode
{
  Dc,
  Planar,
  Horizontal,
  Vertical
};

inline constexpr std::array<IntraMode, 4> kIntraModes = { IntraMode::Dc, IntraMode::Planar, IntraMode::Horizontal,
                                                          IntraMode::Vertical };

const char* intraModeName( IntraMode mode );

/// size x size prediction, row-major.
std::vector<int> predictIntra( IntraMode mode, const IntraRefs& refs, int size );

/// Signed Exp-Golomb length of a quantized level: 0 for zero, 2 floor(log2 |l|) + 2 otherwise.
uint64_t levelBits( int64_t level );

/// Squared coding error and level bits of one residual block after an orthonormal 2-D DCT-II
/// on TUs of min(size, kMaxTuSize) and dead-zone scalar quantization.
struct ResidualCoding
{
  double   distortion = 0.0;
  uint64_t bits       = 0;
};

ResidualCoding codeResidual( std::span<const int> residual, int size, int qp );

struct IntraCostResult
{
  RdCost    cost;
  IntraMode mode = IntraMode::Dc;
};

/// Best of the four predictors; ties keep the earlier mode in kIntraModes.
IntraCostResult intraSearch( const LumaBlock& block, QpConfig qp );
RdCost          intraCost( const LumaBlock& block, QpConfig qp );

/// Quad-tree of split decisions. 8x8 nodes are always leaves.
struct PartitionTree
{
  int                        size  = 0;
  int                        x     = 0;
  int                        y     = 0;
  bool                       split = false;
  std::vector<PartitionTree> children;

  size_t splitCount() const;
  size_t nodeCount() const;
  /// Children are half-size, in Z-order, covering the parent; split only above 8x8.
  bool isValid() const;

  bool operator==( const PartitionTree& ) const = default;
};

/// Split flags of the 64..16 nodes in Z-order preorder ("1 0 0 0 0").
std::string   serializeFlags( const PartitionTree& tree );
PartitionTree parseFlags( const std::string& flags, int size = kCtuSize, int x = 0, int y = 0 );

/// Full search result with the costs behind each decision.
struct RdNode
{
  int                 size = 0;
  BlockOrigin         origin;
  IntraCostResult     whole;
  RdCost              best;
  bool                split = false;
  std::vector<RdNode> children;
};

RdNode        rdQuadTreeSearch( const LumaBlock& block, QpConfig qp );
PartitionTree toPartitionTree( const RdNode& node );

/// Split iff whole cost > sum of the quadrants' best costs + split-flag bits; ties stay whole.
PartitionTree labelPartition( const LumaBlock& block, QpConfig qp );

/// One record per 64/32/16 CU of every CTU, CTUs in raster order, CUs in Z-order.
struct LabeledCorpus
{
  std::vector<LabeledBlock> cu64;
  std::vector<LabeledBlock> cu32;
  std::vector<LabeledBlock> cu16;

  std::vector<LabeledBlock>&       forSize( int size );
  const std::vector<LabeledBlock>& forSize( int size ) const;
};

LabeledCorpus labelCorpus( std::span<const Frame> frames, QpConfig qp, int threads = 1 );

/// Per-size training records as stored on disk. References are not stored.
struct Dataset
{
  int                       cuSize = 0;
  int                       qp     = 0;
  std::vector<LabeledBlock> records;
};

constexpr uint16_t kDatasetVersion = 1;

void    writeDataset( std::ostream& out, const Dataset& dataset );
void    writeDataset( const std::filesystem::path& path, const Dataset& dataset );
Dataset readDataset( std::istream& in );
Dataset readDataset( const std::filesystem::path& path );

} // namespace cupart
