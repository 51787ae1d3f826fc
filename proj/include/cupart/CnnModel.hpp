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

/** \file     CnnModel.hpp
    \brief    per-depth split classifier: topology, inference, training hooks and model files
*/

#pragma once

#include "cupart/MediaIo.hpp"
#include "cupart/NnLayers.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <variant>
#include <vector>

namespace cupart
{

using Layer = std::variant<ConvLayer, PoolLayer, InceptionLayer, DenseLayer, SoftmaxLayer>;

LayerSpec layerSpec( const Layer& layer );

struct SplitProbability
{
  double nonSplit = 0.5;
  double split    = 0.5;
};

class CnnModel
{
public:
  static constexpr uint16_t kFormatVersion = 1;
  static constexpr int      kHeadExtent    = 8;
  static constexpr int      kFeatureWidth  = 256;

  CnnModel() = default;
  /// Validates that the layers chain from a [N, 1, cuSize, cuSize] input to [N, 2].
  CnnModel( int cuSize, std::vector<Layer> layers );

  int                       cuSize() const { return m_cuSize; }
  const std::vector<Layer>& layers() const { return m_layers; }

  /// Shapes at the input and after every layer, for a batch of `batch`.
  std::vector<std::vector<int>> shapeTrace( int batch = 1 ) const;

  /// [N, 1, S, S] -> [N, 2] probabilities (non-split, split).
  Tensor forward( const Tensor& input ) const;
  /// Activation entering the average-pool head.
  Tensor features( const Tensor& input ) const;

  Tensor forwardTrain( const Tensor& input );
  /// Accumulates parameter gradients from d(loss)/d(probabilities).
  void backward( const Tensor& probabilityGrad );

  std::vector<ParamRef> parameters();
  size_t                parameterCount() const;
  void                  zeroGrad();
  void                  sgdStep( double learningRate );
  /// ReLU on/off flags and max-pool winners from the last training forward pass.
  std::vector<uint8_t> activationPattern() const;

  SplitProbability              predict( const LumaBlock& block ) const;
  std::vector<SplitProbability> predict( const std::vector<const LumaBlock*>& blocks ) const;

private:
  size_t headIndex() const;

  int                m_cuSize = 0;
  std::vector<Layer> m_layers;
};

/// Stem, four Inception layers with per-size max pools, 8x8 average pool, FC(2), softmax.
CnnModel buildTopology( int cuSize, uint64_t seed = 0 );

/// Samples / 255 into [N, 1, S, S].
Tensor makeInputBatch( const std::vector<const LumaBlock*>& blocks, int cuSize );

void     writeModel( std::ostream& out, const CnnModel& model );
CnnModel readModel( std::istream& in );
void     saveModel( const std::filesystem::path& path, const CnnModel& model );
CnnModel loadModel( const std::filesystem::path& path );

} // namespace cupart
