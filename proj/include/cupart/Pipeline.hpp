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

/** \file     Pipeline.hpp
    \brief    two-stage CU partition decision: range filter, then per-depth split classifier
*/

#pragma once

#include "cupart/CnnModel.hpp"
#include "cupart/Indicator.hpp"
#include "cupart/RdoOracle.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace cupart
{

/// Probability that a 64/32/16 CU should be split.
class SplitClassifier
{
public:
  virtual ~SplitClassifier() = default;
  virtual double splitProbability( const LumaBlock& block ) const = 0;
};

struct ModelSet
{
  std::optional<CnnModel> cu64;
  std::optional<CnnModel> cu32;
  std::optional<CnnModel> cu16;

  std::optional<CnnModel>&       forSize( int size );
  const std::optional<CnnModel>& forSize( int size ) const;
};

/// Reads cu64.cupm, cu32.cupm and cu16.cupm from `dir`.
ModelSet loadModelSet( const std::filesystem::path& dir );
void     saveModelSet( const std::filesystem::path& dir, const ModelSet& models );
std::filesystem::path modelFileName( int cuSize );

class CnnClassifier : public SplitClassifier
{
public:
  /// Throws if a size is missing or a model was built for another size.
  explicit CnnClassifier( ModelSet models );
  double splitProbability( const LumaBlock& block ) const override;

private:
  ModelSet m_models;
};

/// Exhaustive RD comparison; probability is exactly 0 or 1.
class OracleClassifier : public SplitClassifier
{
public:
  explicit OracleClassifier( QpConfig qp ) : m_qp( qp ) {}
  double splitProbability( const LumaBlock& block ) const override;

private:
  QpConfig m_qp;
};

enum class DecisionStage
{
  EarlyTerminated,
  CnnNonSplit,
  CnnSplit,
  ForcedLeaf
};

const char* stageName( DecisionStage stage );

struct TraceNode
{
  int                   frame = 0;
  int                   ctuX  = 0;
  int                   ctuY  = 0;
  int                   size  = 0;
  int                   x     = 0;
  int                   y     = 0;
  DecisionStage         stage = DecisionStage::ForcedLeaf;
  std::optional<double> pSplit;
};

struct PipelineConfig
{
  EarlyTermThresholds thresholds;
  double              tau = 0.5;
};

struct CtuDecision
{
  PartitionTree          tree;
  std::vector<TraceNode> trace;
  size_t                 classifierCalls = 0;
};

/// Needs a 64x64 block; its origin gives the tree coordinates.
CtuDecision decideCtu( const LumaBlock& ctu, const SplitClassifier& classifier, const PipelineConfig& config );

struct FrameDecision
{
  int                        frame = 0;
  std::vector<PartitionTree> trees; // raster order
  std::vector<TraceNode>     trace;
  size_t                     classifierCalls = 0;

  /// Early-terminated share of the 64/32/16 nodes visited at `size` (0 = all sizes).
  double earlyTerminatedFraction( int size = 0 ) const;
};

FrameDecision decideFrame( const Frame& frame, const SplitClassifier& classifier, const PipelineConfig& config,
                           int threads = 1 );

/// "frame x y f f f ..." per CTU.
void writePartitions( std::ostream& out, std::span<const FrameDecision> decisions );
void writeTraceCsv( std::ostream& out, std::span<const FrameDecision> decisions );

} // namespace cupart
