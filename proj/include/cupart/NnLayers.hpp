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

/** \file     NnLayers.hpp
    \brief    convolution, pooling, Inception, fully connected and softmax layers (forward + backward)

    Activations are NCHW. Each layer offers a const inference path and a training path that
    caches what its backward pass needs. Gradients accumulate until zeroGrad().
*/

#pragma once

#include "cupart/Random.hpp"
#include "cupart/Tensor.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cupart
{

enum class LayerKind : uint8_t
{
  Conv           = 0,
  MaxPool        = 1,
  AvgPool        = 2,
  Inception      = 3,
  FullyConnected = 4,
  Softmax        = 5
};

enum class Padding : uint8_t
{
  Same  = 0,
  Valid = 1
};

const char* layerKindName( LayerKind kind );

struct LayerSpec
{
  LayerKind kind        = LayerKind::Conv;
  int       kernelW     = 1;
  int       kernelH     = 1;
  int       stride      = 1;
  Padding   padding     = Padding::Valid;
  int       inChannels  = 0;
  int       outChannels = 0;

  bool operator==( const LayerSpec& ) const = default;
};

/// Output extent and leading pad along one axis. Same: ceil(in / stride) with the total pad
/// split floor-first; Valid: (in - kernel) / stride + 1.
struct WindowGeometry
{
  int out       = 0;
  int padBefore = 0;
};

WindowGeometry windowGeometry( int in, int kernel, int stride, Padding padding );

struct ParamRef
{
  std::string name;
  Tensor*     value = nullptr;
  Tensor*     grad  = nullptr;
};

class ConvLayer
{
public:
  ConvLayer() = default;
  ConvLayer( const LayerSpec& spec, bool relu = true );

  const LayerSpec& spec() const { return m_spec; }
  bool             relu() const { return m_relu; }
  Tensor&          weights() { return m_weights; }
  const Tensor&    weights() const { return m_weights; }
  Tensor&          bias() { return m_bias; }
  const Tensor&    bias() const { return m_bias; }
  const Tensor&    weightGrad() const { return m_weightGrad; }
  const Tensor&    biasGrad() const { return m_biasGrad; }

  /// Uniform(-sqrt(6 / fan_in), +sqrt(6 / fan_in)) weights, zero bias.
  void initialize( Rng& rng );

  std::vector<int> outputShape( const std::vector<int>& in ) const;
  Tensor           forward( const Tensor& input ) const;
  Tensor           forwardTrain( const Tensor& input );
  /// Returns the input gradient (empty when needInputGrad is false).
  Tensor backward( const Tensor& upstream, bool needInputGrad = true );

  void collectParameters( std::vector<ParamRef>& out, const std::string& prefix );
  void appendReluPattern( std::vector<uint8_t>& out ) const;

private:
  LayerSpec m_spec;
  bool      m_relu = true;
  Tensor    m_weights; // [out, in, kh, kw]
  Tensor    m_bias;    // [out]
  Tensor    m_weightGrad;
  Tensor    m_biasGrad;
  Tensor    m_input;
  Tensor    m_output;
};

class PoolLayer
{
public:
  PoolLayer() = default;
  explicit PoolLayer( const LayerSpec& spec );

  const LayerSpec& spec() const { return m_spec; }

  std::vector<int> outputShape( const std::vector<int>& in ) const;
  Tensor           forward( const Tensor& input ) const;
  Tensor           forwardTrain( const Tensor& input );
  Tensor           backward( const Tensor& upstream );

  /// Winning window positions of the last max-pool training pass, as bytes.
  void appendArgmaxPattern( std::vector<uint8_t>& out ) const;

private:
  Tensor run( const Tensor& input, std::vector<int32_t>* argmax ) const;

  LayerSpec            m_spec;
  std::vector<int>     m_inputShape;
  std::vector<int32_t> m_argmax;
};

/// GoogLeNet-style block: 1x1 | 1x1 -> 3x3 | 1x1 -> 5x5 | 3x3 max pool -> 1x1, concatenated.
struct InceptionConfig
{
  int inChannels     = 0;
  int branch1x1      = 64;
  int reduce3x3      = 96;
  int branch3x3      = 128;
  int reduce5x5      = 16;
  int branch5x5      = 32;
  int poolProjection = 32;

  int  outChannels() const { return branch1x1 + branch3x3 + branch5x5 + poolProjection; }
  bool operator==( const InceptionConfig& ) const = default;
};

class InceptionLayer
{
public:
  InceptionLayer() = default;
  explicit InceptionLayer( const InceptionConfig& config );

  const InceptionConfig& config() const { return m_config; }
  LayerSpec              spec() const;

  ConvLayer&       branch1x1() { return m_branch1x1; }
  ConvLayer&       reduce3x3() { return m_reduce3x3; }
  ConvLayer&       branch3x3() { return m_branch3x3; }
  ConvLayer&       reduce5x5() { return m_reduce5x5; }
  ConvLayer&       branch5x5() { return m_branch5x5; }
  ConvLayer&       poolProjection() { return m_poolProjection; }
  const PoolLayer& branchPool() const { return m_pool; }

  void initialize( Rng& rng );

  std::vector<int> outputShape( const std::vector<int>& in ) const;
  Tensor           forward( const Tensor& input ) const;
  Tensor           forwardTrain( const Tensor& input );
  Tensor           backward( const Tensor& upstream );

  void collectParameters( std::vector<ParamRef>& out, const std::string& prefix );
  void appendActivationPattern( std::vector<uint8_t>& out ) const;

private:
  InceptionConfig m_config;
  ConvLayer       m_branch1x1;
  ConvLayer       m_reduce3x3;
  ConvLayer       m_branch3x3;
  ConvLayer       m_reduce5x5;
  ConvLayer       m_branch5x5;
  PoolLayer       m_pool;
  ConvLayer       m_poolProjection;
};

/// Affine map on the flattened per-sample input; no activation.
class DenseLayer
{
public:
  DenseLayer() = default;
  DenseLayer( int inFeatures, int outFeatures );

  LayerSpec     spec() const;
  Tensor&       weights() { return m_weights; }
  const Tensor& weights() const { return m_weights; }
  Tensor&       bias() { return m_bias; }
  const Tensor& bias() const { return m_bias; }
  const Tensor& weightGrad() const { return m_weightGrad; }
  const Tensor& biasGrad() const { return m_biasGrad; }

  void initialize( Rng& rng );

  std::vector<int> outputShape( const std::vector<int>& in ) const;
  Tensor           forward( const Tensor& input ) const;
  Tensor           forwardTrain( const Tensor& input );
  Tensor           backward( const Tensor& upstream );

  void collectParameters( std::vector<ParamRef>& out, const std::string& prefix );

private:
  int    m_in  = 0;
  int    m_out = 0;
  Tensor m_weights; // [out, in]
  Tensor m_bias;    // [out]
  Tensor m_weightGrad;
  Tensor m_biasGrad;
  Tensor m_input;
};

class SoftmaxLayer
{
public:
  SoftmaxLayer() = default;
  explicit SoftmaxLayer( int classes ) : m_classes( classes ) {}

  LayerSpec spec() const;

  std::vector<int> outputShape( const std::vector<int>& in ) const;
  Tensor           forward( const Tensor& input ) const;
  Tensor           forwardTrain( const Tensor& input );
  /// Maps a gradient w.r.t. the probabilities to one w.r.t. the logits.
  Tensor backward( const Tensor& upstream );

private:
  int    m_classes = 2;
  Tensor m_output;
};

/// Stateless conveniences over the layer classes.
Tensor conv2dForward( const Tensor& input, const Tensor& weights, const Tensor& bias, const LayerSpec& spec,
                      bool relu = true );
Tensor poolForward( const Tensor& input, const LayerSpec& spec );
Tensor inceptionForward( const Tensor& input, const InceptionLayer& layer );

/// Channel-axis concatenation / slicing of NCHW tensors.
Tensor concatChannels( const std::vector<const Tensor*>& parts );
Tensor sliceChannels( const Tensor& tensor, int begin, int count );

} // namespace cupart
