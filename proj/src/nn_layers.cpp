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

/** \file     nn_layers.cpp
    \brief    convolution, pooling, Inception, fully connected and softmax layers (forward + backward)
*/

#include "cupart/NnLayers.hpp"
#include "cupart/Error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cupart
{

namespace
{

using MatrixRM   = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRM      = Eigen::Map<MatrixRM>;
using ConstMapRM = Eigen::Map<const MatrixRM>;
using VecMap     = Eigen::Map<Eigen::VectorXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;

struct ConvGeometry
{
  int            batch = 0, inC = 0, inH = 0, inW = 0;
  int            outC = 0, kH = 0, kW = 0, stride = 1;
  WindowGeometry gy, gx;

  int  patch() const { return inC * kH * kW; }
  int  inPlane() const { return inH * inW; }
  int  outPlane() const { return gy.out * gx.out; }
  bool direct() const { return kH == 1 && kW == 1 && stride == 1 && gy.padBefore == 0 && gx.padBefore == 0; }
};

void requireRank4( const std::vector<int>& shape, const char* who )
{
  if( shape.size() != 4 )
  {
    throw ShapeError( std::string( who ) + ": expected NCHW input" );
  }
}

ConvGeometry convGeometry( const LayerSpec& spec, const std::vector<int>& in )
{
  requireRank4( in, "conv" );
  if( in[1] != spec.inChannels )
  {
    throw ShapeError( "conv: input has " + std::to_string( in[1] ) + " channels, layer expects "
                      + std::to_string( spec.inChannels ) );
  }
  ConvGeometry g;
  g.batch  = in[0];
  g.inC    = in[1];
  g.inH    = in[2];
  g.inW    = in[3];
  g.outC   = spec.outChannels;
  g.kH     = spec.kernelH;
  g.kW     = spec.kernelW;
  g.stride = spec.stride;
  g.gy     = windowGeometry( g.inH, g.kH, g.stride, spec.padding );
  g.gx     = windowGeometry( g.inW, g.kW, g.stride, spec.padding );
  return g;
}

void im2col( const double* in, const ConvGeometry& g, double* col )
{
  const int outW = g.gx.out;
  for( int c = 0; c < g.inC; c++ )
  {
    const double* plane = in + static_cast<size_t>( c ) * g.inPlane();
    for( int ky = 0; ky < g.kH; ky++ )
    {
      for( int kx = 0; kx < g.kW; kx++ )
      {
        double* dst = col + static_cast<size_t>( ( c * g.kH + ky ) * g.kW + kx ) * g.outPlane();
        for( int oy = 0; oy < g.gy.out; oy++ )
        {
          const int iy = oy * g.stride - g.gy.padBefore + ky;
          double*   row = dst + static_cast<size_t>( oy ) * outW;
          if( iy < 0 || iy >= g.inH )
          {
            std::fill_n( row, outW, 0.0 );
            continue;
          }
          const double* src = plane + static_cast<size_t>( iy ) * g.inW;
          for( int ox = 0; ox < outW; ox++ )
          {
            const int ix = ox * g.stride - g.gx.padBefore + kx;
            row[ox]      = ( ix >= 0 && ix < g.inW ) ? src[ix] : 0.0;
          }
        }
      }
    }
  }
}

void col2imAdd( const double* col, const ConvGeometry& g, double* dx )
{
  const int outW = g.gx.out;
  for( int c = 0; c < g.inC; c++ )
  {
    double* plane = dx + static_cast<size_t>( c ) * g.inPlane();
    for( int ky = 0; ky < g.kH; ky++ )
    {
      for( int kx = 0; kx < g.kW; kx++ )
      {
        const double* src = col + static_cast<size_t>( ( c * g.kH + ky ) * g.kW + kx ) * g.outPlane();
        for( int oy = 0; oy < g.gy.out; oy++ )
        {
          const int iy = oy * g.stride - g.gy.padBefore + ky;
          if( iy < 0 || iy >= g.inH )
          {
            continue;
          }
          const double* row = src + static_cast<size_t>( oy ) * outW;
          double*       dst = plane + static_cast<size_t>( iy ) * g.inW;
          for( int ox = 0; ox < outW; ox++ )
          {
            const int ix = ox * g.stride - g.gx.padBefore + kx;
            if( ix >= 0 && ix < g.inW )
            {
              dst[ix] += row[ox];
            }
          }
        }
      }
    }
  }
}

Tensor convCompute( const Tensor& input, const Tensor& weights, const Tensor& bias, const LayerSpec& spec, bool relu )
{
  const auto g = convGeometry( spec, input.shape() );
  if( weights.shape() != std::vector<int>{ g.outC, g.inC, g.kH, g.kW } || bias.shape() != std::vector<int>{ g.outC } )
  {
    throw ShapeError( "conv: parameter shapes do not match the layer spec" );
  }
  Tensor           output( { g.batch, g.outC, g.gy.out, g.gx.out } );
  ConstMapRM       w( weights.data(), g.outC, g.patch() );
  ConstVecMap      b( bias.data(), g.outC );
  AlignedValues    col( g.direct() ? 0 : static_cast<size_t>( g.patch() ) * g.outPlane() );

  for( int n = 0; n < g.batch; n++ )
  {
    const double* in = input.data() + static_cast<size_t>( n ) * g.inC * g.inPlane();
    MapRM         out( output.data() + static_cast<size_t>( n ) * g.outC * g.outPlane(), g.outC, g.outPlane() );
    if( g.direct() )
    {
      out.noalias() = w * ConstMapRM( in, g.inC, g.inPlane() );
    }
    else
    {
      im2col( in, g, col.data() );
      out.noalias() = w * ConstMapRM( col.data(), g.patch(), g.outPlane() );
    }
    out.colwise() += b;
    if( relu )
    {
      out = out.cwiseMax( 0.0 );
    }
  }
  return output;
}

} // namespace

const char* layerKindName( LayerKind kind )
{
  switch( kind )
  {
  case LayerKind::Conv: return "Conv";
  case LayerKind::MaxPool: return "MaxPool";
  case LayerKind::AvgPool: return "AvgPool";
  case LayerKind::Inception: return "Inception";
  case LayerKind::FullyConnected: return "FullyConnected";
  case LayerKind::Softmax: return "Softmax";
  }
  return "?";
}

WindowGeometry windowGeometry( int in, int kernel, int stride, Padding padding )
{
  if( in <= 0 || kernel <= 0 || stride <= 0 )
  {
    throw ShapeError( "window geometry needs positive extents" );
  }
  WindowGeometry geometry;
  if( padding == Padding::Valid )
  {
    if( in < kernel )
    {
      throw ShapeError( "valid window " + std::to_string( kernel ) + " larger than input " + std::to_string( in ) );
    }
    geometry.out = ( in - kernel ) / stride + 1;
    return geometry;
  }
  geometry.out         = ( in + stride - 1 ) / stride;
  const int total      = std::max( ( geometry.out - 1 ) * stride + kernel - in, 0 );
  geometry.padBefore   = total / 2;
  return geometry;
}

// ---------------------------------------------------------------------------------------------
// Conv

ConvLayer::ConvLayer( const LayerSpec& spec, bool relu ) : m_spec( spec ), m_relu( relu )
{
  if( spec.kind != LayerKind::Conv || spec.inChannels <= 0 || spec.outChannels <= 0 )
  {
    throw ShapeError( "invalid convolution spec" );
  }
  m_weights    = Tensor( { spec.outChannels, spec.inChannels, spec.kernelH, spec.kernelW } );
  m_bias       = Tensor( { spec.outChannels } );
  m_weightGrad = Tensor( m_weights.shape() );
  m_biasGrad   = Tensor( m_bias.shape() );
}

void ConvLayer::initialize( Rng& rng )
{
  const double limit = std::sqrt( 6.0 / ( m_spec.inChannels * m_spec.kernelH * m_spec.kernelW ) );
  for( auto& w: m_weights.values() )
  {
    w = rng.uniform( -limit, limit );
  }
  m_bias.fill( 0.0 );
}

std::vector<int> ConvLayer::outputShape( const std::vector<int>& in ) const
{
  const auto g = convGeometry( m_spec, in );
  return { g.batch, g.outC, g.gy.out, g.gx.out };
}

Tensor ConvLayer::forward( const Tensor& input ) const
{
  auto out = convCompute( input, m_weights, m_bias, m_spec, m_relu );
  requireFinite( out, "Conv output" );
  return out;
}

Tensor ConvLayer::forwardTrain( const Tensor& input )
{
  m_input  = input;
  m_output = forward( input );
  return m_output;
}

Tensor ConvLayer::backward( const Tensor& upstream, bool needInputGrad )
{
  if( m_input.empty() )
  {
    throw Error( "conv backward without a cached forward pass" );
  }
  if( upstream.shape() != m_output.shape() )
  {
    throw ShapeError( "conv backward: upstream shape " + upstream.shapeString() + " != output shape "
                      + m_output.shapeString() );
  }
  const auto g = convGeometry( m_spec, m_input.shape() );

  Tensor delta = upstream;
  if( m_relu )
  {
    for( size_t i = 0; i < delta.size(); i++ )
    {
      if( !( m_output[i] > 0.0 ) )
      {
        delta[i] = 0.0;
      }
    }
  }

  Tensor              dx = needInputGrad ? Tensor( m_input.shape() ) : Tensor();
  ConstMapRM          w( m_weights.data(), g.outC, g.patch() );
  MapRM               gw( m_weightGrad.data(), g.outC, g.patch() );
  VecMap              gb( m_biasGrad.data(), g.outC );
  AlignedValues       col( g.direct() ? 0 : static_cast<size_t>( g.patch() ) * g.outPlane() );
  AlignedValues       dcol( g.direct() || !needInputGrad ? 0 : col.size() );

  for( int n = 0; n < g.batch; n++ )
  {
    const double* in = m_input.data() + static_cast<size_t>( n ) * g.inC * g.inPlane();
    ConstMapRM    dz( delta.data() + static_cast<size_t>( n ) * g.outC * g.outPlane(), g.outC, g.outPlane() );
    if( g.direct() )
    {
      ConstMapRM x( in, g.inC, g.inPlane() );
      gw.noalias() += dz * x.transpose();
    }
    else
    {
      im2col( in, g, col.data() );
      gw.noalias() += dz * ConstMapRM( col.data(), g.patch(), g.outPlane() ).transpose();
    }
    for( int c = 0; c < g.outC; c++ )
    {
      const double* row = delta.data() + ( static_cast<size_t>( n ) * g.outC + c ) * g.outPlane();
      for( int i = 0; i < g.outPlane(); i++ )
      {
        gb[c] += row[i];
      }
    }

    if( needInputGrad )
    {
      double* dxn = dx.data() + static_cast<size_t>( n ) * g.inC * g.inPlane();
      if( g.direct() )
      {
        MapRM( dxn, g.inC, g.inPlane() ).noalias() = w.transpose() * dz;
      }
      else
      {
        MapRM( dcol.data(), g.patch(), g.outPlane() ).noalias() = w.transpose() * dz;
        col2imAdd( dcol.data(), g, dxn );
      }
    }
  }
  return dx;
}

void ConvLayer::collectParameters( std::vector<ParamRef>& out, const std::string& prefix )
{
  out.push_back( { prefix + ".weight", &m_weights, &m_weightGrad } );
  out.push_back( { prefix + ".bias", &m_bias, &m_biasGrad } );
}

void ConvLayer::appendReluPattern( std::vector<uint8_t>& out ) const
{
  if( !m_relu )
  {
    return;
  }
  for( const double v: m_output.values() )
  {
    out.push_back( v > 0.0 );
  }
}

// ---------------------------------------------------------------------------------------------
// Pooling

PoolLayer::PoolLayer( const LayerSpec& spec ) : m_spec( spec )
{
  if( spec.kind != LayerKind::MaxPool && spec.kind != LayerKind::AvgPool )
  {
    throw ShapeError( "pool layer needs a MaxPool or AvgPool spec" );
  }
}

std::vector<int> PoolLayer::outputShape( const std::vector<int>& in ) const
{
  requireRank4( in, "pool" );
  if( m_spec.inChannels && in[1] != m_spec.inChannels )
  {
    throw ShapeError( "pool: channel count mismatch" );
  }
  const auto gy = windowGeometry( in[2], m_spec.kernelH, m_spec.stride, m_spec.padding );
  const auto gx = windowGeometry( in[3], m_spec.kernelW, m_spec.stride, m_spec.padding );
  return { in[0], in[1], gy.out, gx.out };
}

Tensor PoolLayer::run( const Tensor& input, std::vector<int32_t>* argmax ) const
{
  const auto outShape = outputShape( input.shape() );
  const int  inH = input.dim( 2 ), inW = input.dim( 3 );
  const auto gy  = windowGeometry( inH, m_spec.kernelH, m_spec.stride, m_spec.padding );
  const auto gx  = windowGeometry( inW, m_spec.kernelW, m_spec.stride, m_spec.padding );
  const bool isMax = m_spec.kind == LayerKind::MaxPool;

  Tensor     output( outShape );
  const auto planes = static_cast<size_t>( outShape[0] ) * outShape[1];
  if( argmax )
  {
    argmax->assign( output.size(), -1 );
  }
  size_t o = 0;
  for( size_t p = 0; p < planes; p++ )
  {
    const double* plane = input.data() + p * inH * inW;
    for( int oy = 0; oy < gy.out; oy++ )
    {
      const int y0 = oy * m_spec.stride - gy.padBefore;
      for( int ox = 0; ox < gx.out; ox++, o++ )
      {
        const int x0    = ox * m_spec.stride - gx.padBefore;
        double    best  = -std::numeric_limits<double>::infinity();
        int       where = -1;
        double    sum   = 0.0;
        int       count = 0;
        for( int y = std::max( y0, 0 ); y < std::min( y0 + m_spec.kernelH, inH ); y++ )
        {
          for( int x = std::max( x0, 0 ); x < std::min( x0 + m_spec.kernelW, inW ); x++ )
          {
            const double v = plane[y * inW + x];
            if( v > best || where < 0 )
            {
              best  = v;
              where = y * inW + x;
            }
            sum += v;
            count++;
          }
        }
        output[o] = isMax ? best : sum / count;
        if( argmax )
        {
          ( *argmax )[o] = where;
        }
      }
    }
  }
  requireFinite( output, "pool output" );
  return output;
}

Tensor PoolLayer::forward( const Tensor& input ) const
{
  return run( input, nullptr );
}

Tensor PoolLayer::forwardTrain( const Tensor& input )
{
  m_inputShape = input.shape();
  return run( input, m_spec.kind == LayerKind::MaxPool ? &m_argmax : nullptr );
}

Tensor PoolLayer::backward( const Tensor& upstream )
{
  if( m_inputShape.empty() )
  {
    throw Error( "pool backward without a cached forward pass" );
  }
  if( upstream.shape() != outputShape( m_inputShape ) )
  {
    throw ShapeError( "pool backward: upstream shape mismatch" );
  }
  Tensor     dx( m_inputShape );
  const int  inH = m_inputShape[2], inW = m_inputShape[3];
  const int  outH = upstream.dim( 2 ), outW = upstream.dim( 3 );
  const auto planes = static_cast<size_t>( m_inputShape[0] ) * m_inputShape[1];

  if( m_spec.kind == LayerKind::MaxPool )
  {
    for( size_t p = 0, o = 0; p < planes; p++ )
    {
      double* plane = dx.data() + p * inH * inW;
      for( int i = 0; i < outH * outW; i++, o++ )
      {
        plane[m_argmax[o]] += upstream[o];
      }
    }
    return dx;
  }

  const auto gy = windowGeometry( inH, m_spec.kernelH, m_spec.stride, m_spec.padding );
  const auto gx = windowGeometry( inW, m_spec.kernelW, m_spec.stride, m_spec.padding );
  size_t     o  = 0;
  for( size_t p = 0; p < planes; p++ )
  {
    double* plane = dx.data() + p * inH * inW;
    for( int oy = 0; oy < outH; oy++ )
    {
      const int y0 = oy * m_spec.stride - gy.padBefore;
      const int y1 = std::min( y0 + m_spec.kernelH, inH );
      for( int ox = 0; ox < outW; ox++, o++ )
      {
        const int x0    = ox * m_spec.stride - gx.padBefore;
        const int x1    = std::min( x0 + m_spec.kernelW, inW );
        const int count = ( y1 - std::max( y0, 0 ) ) * ( x1 - std::max( x0, 0 ) );
        const double share = upstream[o] / count;
        for( int y = std::max( y0, 0 ); y < y1; y++ )
        {
          for( int x = std::max( x0, 0 ); x < x1; x++ )
          {
            plane[y * inW + x] += share;
          }
        }
      }
    }
  }
  return dx;
}

void PoolLayer::appendArgmaxPattern( std::vector<uint8_t>& out ) const
{
  for( const int32_t a: m_argmax )
  {
    for( int b = 0; b < 4; b++ )
    {
      out.push_back( static_cast<uint8_t>( static_cast<uint32_t>( a ) >> ( 8 * b ) ) );
    }
  }
}

// ---------------------------------------------------------------------------------------------
// Inception

namespace
{

LayerSpec convSpec( int kernel, int in, int out )
{
  return { LayerKind::Conv, kernel, kernel, 1, Padding::Same, in, out };
}

} // namespace

InceptionLayer::InceptionLayer( const InceptionConfig& config )
  : m_config( config )
  , m_branch1x1( convSpec( 1, config.inChannels, config.branch1x1 ) )
  , m_reduce3x3( convSpec( 1, config.inChannels, config.reduce3x3 ) )
  , m_branch3x3( convSpec( 3, config.reduce3x3, config.branch3x3 ) )
  , m_reduce5x5( convSpec( 1, config.inChannels, config.reduce5x5 ) )
  , m_branch5x5( convSpec( 5, config.reduce5x5, config.branch5x5 ) )
  , m_pool( LayerSpec{ LayerKind::MaxPool, 3, 3, 1, Padding::Same, config.inChannels, config.inChannels } )
  , m_poolProjection( convSpec( 1, config.inChannels, config.poolProjection ) )
{
}

LayerSpec InceptionLayer::spec() const
{
  return { LayerKind::Inception, 1, 1, 1, Padding::Same, m_config.inChannels, m_config.outChannels() };
}

void InceptionLayer::initialize( Rng& rng )
{
  m_branch1x1.initialize( rng );
  m_reduce3x3.initialize( rng );
  m_branch3x3.initialize( rng );
  m_reduce5x5.initialize( rng );
  m_branch5x5.initialize( rng );
  m_poolProjection.initialize( rng );
}

std::vector<int> InceptionLayer::outputShape( const std::vector<int>& in ) const
{
  auto shape = m_branch1x1.outputShape( in );
  if( in[2] < 5 || in[3] < 5 )
  {
    throw ShapeError( "inception needs spatial extent >= 5" );
  }
  shape[1] = m_config.outChannels();
  return shape;
}

Tensor InceptionLayer::forward( const Tensor& input ) const
{
  outputShape( input.shape() );
  const Tensor a = m_branch1x1.forward( input );
  const Tensor b = m_branch3x3.forward( m_reduce3x3.forward( input ) );
  const Tensor c = m_branch5x5.forward( m_reduce5x5.forward( input ) );
  const Tensor d = m_poolProjection.forward( m_pool.forward( input ) );
  return concatChannels( { &a, &b, &c, &d } );
}

Tensor InceptionLayer::forwardTrain( const Tensor& input )
{
  outputShape( input.shape() );
  const Tensor a = m_branch1x1.forwardTrain( input );
  const Tensor b = m_branch3x3.forwardTrain( m_reduce3x3.forwardTrain( input ) );
  const Tensor c = m_branch5x5.forwardTrain( m_reduce5x5.forwardTrain( input ) );
  const Tensor d = m_poolProjection.forwardTrain( m_pool.forwardTrain( input ) );
  return concatChannels( { &a, &b, &c, &d } );
}

Tensor InceptionLayer::backward( const Tensor& upstream )
{
  int    begin = 0;
  auto   take  = [&]( int count ) {
    Tensor part = sliceChannels( upstream, begin, count );
    begin += count;
    return part;
  };
  const Tensor da = take( m_config.branch1x1 );
  const Tensor db = take( m_config.branch3x3 );
  const Tensor dc = take( m_config.branch5x5 );
  const Tensor dd = take( m_config.poolProjection );

  Tensor dx = m_branch1x1.backward( da );
  auto   accumulate = [&dx]( const Tensor& part ) {
    for( size_t i = 0; i < dx.size(); i++ )
    {
      dx[i] += part[i];
    }
  };
  accumulate( m_reduce3x3.backward( m_branch3x3.backward( db ) ) );
  accumulate( m_reduce5x5.backward( m_branch5x5.backward( dc ) ) );
  accumulate( m_pool.backward( m_poolProjection.backward( dd ) ) );
  return dx;
}

void InceptionLayer::collectParameters( std::vector<ParamRef>& out, const std::string& prefix )
{
  m_branch1x1.collectParameters( out, prefix + ".b1x1" );
  m_reduce3x3.collectParameters( out, prefix + ".r3x3" );
  m_branch3x3.collectParameters( out, prefix + ".b3x3" );
  m_reduce5x5.collectParameters( out, prefix + ".r5x5" );
  m_branch5x5.collectParameters( out, prefix + ".b5x5" );
  m_poolProjection.collectParameters( out, prefix + ".pproj" );
}

void InceptionLayer::appendActivationPattern( std::vector<uint8_t>& out ) const
{
  m_branch1x1.appendReluPattern( out );
  m_reduce3x3.appendReluPattern( out );
  m_branch3x3.appendReluPattern( out );
  m_reduce5x5.appendReluPattern( out );
  m_branch5x5.appendReluPattern( out );
  m_pool.appendArgmaxPattern( out );
  m_poolProjection.appendReluPattern( out );
}

// ---------------------------------------------------------------------------------------------
// Fully connected

DenseLayer::DenseLayer( int inFeatures, int outFeatures ) : m_in( inFeatures ), m_out( outFeatures )
{
  if( inFeatures <= 0 || outFeatures <= 0 )
  {
    throw ShapeError( "dense layer needs positive feature counts" );
  }
  m_weights    = Tensor( { outFeatures, inFeatures } );
  m_bias       = Tensor( { outFeatures } );
  m_weightGrad = Tensor( m_weights.shape() );
  m_biasGrad   = Tensor( m_bias.shape() );
}

LayerSpec DenseLayer::spec() const
{
  return { LayerKind::FullyConnected, 1, 1, 1, Padding::Valid, m_in, m_out };
}

void DenseLayer::initialize( Rng& rng )
{
  const double limit = std::sqrt( 6.0 / m_in );
  for( auto& w: m_weights.values() )
  {
    w = rng.uniform( -limit, limit );
  }
  m_bias.fill( 0.0 );
}

std::vector<int> DenseLayer::outputShape( const std::vector<int>& in ) const
{
  if( in.empty() || shapeVolume( in ) != static_cast<size_t>( in[0] ) * m_in )
  {
    throw ShapeError( "dense: input does not flatten to " + std::to_string( m_in ) + " features" );
  }
  return { in[0], m_out };
}

Tensor DenseLayer::forward( const Tensor& input ) const
{
  const auto shape = outputShape( input.shape() );
  Tensor     output( shape );
  ConstMapRM x( input.data(), shape[0], m_in );
  MapRM      y( output.data(), shape[0], m_out );
  y.noalias() = x * ConstMapRM( m_weights.data(), m_out, m_in ).transpose();
  y.rowwise() += ConstVecMap( m_bias.data(), m_out ).transpose();
  requireFinite( output, "FullyConnected output" );
  return output;
}

Tensor DenseLayer::forwardTrain( const Tensor& input )
{
  m_input = input;
  return forward( input );
}

Tensor DenseLayer::backward( const Tensor& upstream )
{
  if( m_input.empty() )
  {
    throw Error( "dense backward without a cached forward pass" );
  }
  const int batch = m_input.dim( 0 );
  if( upstream.shape() != std::vector<int>{ batch, m_out } )
  {
    throw ShapeError( "dense backward: upstream shape mismatch" );
  }
  ConstMapRM dy( upstream.data(), batch, m_out );
  ConstMapRM x( m_input.data(), batch, m_in );
  MapRM( m_weightGrad.data(), m_out, m_in ).noalias() += dy.transpose() * x;
  for( int n = 0; n < batch; n++ )
  {
    for( int k = 0; k < m_out; k++ )
    {
      m_biasGrad[k] += upstream[static_cast<size_t>( n ) * m_out + k];
    }
  }

  Tensor dx( m_input.shape() );
  MapRM( dx.data(), batch, m_in ).noalias() = dy * ConstMapRM( m_weights.data(), m_out, m_in );
  return dx;
}

void DenseLayer::collectParameters( std::vector<ParamRef>& out, const std::string& prefix )
{
  out.push_back( { prefix + ".weight", &m_weights, &m_weightGrad } );
  out.push_back( { prefix + ".bias", &m_bias, &m_biasGrad } );
}

// ---------------------------------------------------------------------------------------------
// Softmax

LayerSpec SoftmaxLayer::spec() const
{
  return { LayerKind::Softmax, 1, 1, 1, Padding::Valid, m_classes, m_classes };
}

std::vector<int> SoftmaxLayer::outputShape( const std::vector<int>& in ) const
{
  if( in.size() != 2 || in[1] != m_classes )
  {
    throw ShapeError( "softmax expects [N, " + std::to_string( m_classes ) + "]" );
  }
  return in;
}

Tensor SoftmaxLayer::forward( const Tensor& input ) const
{
  outputShape( input.shape() );
  Tensor output( input.shape() );
  for( int n = 0; n < input.dim( 0 ); n++ )
  {
    const double* z = input.data() + static_cast<size_t>( n ) * m_classes;
    double*       p = output.data() + static_cast<size_t>( n ) * m_classes;
    const double  top = *std::max_element( z, z + m_classes );
    double        sum = 0.0;
    for( int k = 0; k < m_classes; k++ )
    {
      p[k] = std::exp( z[k] - top );
      sum += p[k];
    }
    for( int k = 0; k < m_classes; k++ )
    {
      p[k] /= sum;
    }
  }
  requireFinite( output, "Softmax output" );
  return output;
}

Tensor SoftmaxLayer::forwardTrain( const Tensor& input )
{
  m_output = forward( input );
  return m_output;
}

Tensor SoftmaxLayer::backward( const Tensor& upstream )
{
  if( m_output.empty() || upstream.shape() != m_output.shape() )
  {
    throw ShapeError( "softmax backward: missing cache or shape mismatch" );
  }
  Tensor dz( upstream.shape() );
  for( int n = 0; n < upstream.dim( 0 ); n++ )
  {
    const double* p = m_output.data() + static_cast<size_t>( n ) * m_classes;
    const double* g = upstream.data() + static_cast<size_t>( n ) * m_classes;
    double        dot = 0.0;
    for( int k = 0; k < m_classes; k++ )
    {
      dot += g[k] * p[k];
    }
    for( int k = 0; k < m_classes; k++ )
    {
      dz[static_cast<size_t>( n ) * m_classes + k] = p[k] * ( g[k] - dot );
    }
  }
  return dz;
}

// ---------------------------------------------------------------------------------------------

Tensor conv2dForward( const Tensor& input, const Tensor& weights, const Tensor& bias, const LayerSpec& spec, bool relu )
{
  return convCompute( input, weights, bias, spec, relu );
}

Tensor poolForward( const Tensor& input, const LayerSpec& spec )
{
  return PoolLayer( spec ).forward( input );
}

Tensor inceptionForward( const Tensor& input, const InceptionLayer& layer )
{
  return layer.forward( input );
}

Tensor concatChannels( const std::vector<const Tensor*>& parts )
{
  if( parts.empty() )
  {
    throw ShapeError( "nothing to concatenate" );
  }
  auto shape = parts.front()->shape();
  requireRank4( shape, "concat" );
  int channels = 0;
  for( const auto* part: parts )
  {
    const auto& s = part->shape();
    if( s.size() != 4 || s[0] != shape[0] || s[2] != shape[2] || s[3] != shape[3] )
    {
      throw ShapeError( "concat: mismatched part shapes" );
    }
    channels += s[1];
  }
  shape[1]           = channels;
  Tensor       out( shape );
  const size_t plane = static_cast<size_t>( shape[2] ) * shape[3];
  double*      dst   = out.data();
  for( int n = 0; n < shape[0]; n++ )
  {
    for( const auto* part: parts )
    {
      const size_t chunk = part->dim( 1 ) * plane;
      std::copy_n( part->data() + n * chunk, chunk, dst );
      dst += chunk;
    }
  }
  return out;
}

Tensor sliceChannels( const Tensor& tensor, int begin, int count )
{
  auto shape = tensor.shape();
  requireRank4( shape, "slice" );
  if( begin < 0 || count < 0 || begin + count > shape[1] )
  {
    throw ShapeError( "channel slice out of range" );
  }
  const size_t plane = static_cast<size_t>( shape[2] ) * shape[3];
  const int    total = shape[1];
  shape[1]           = count;
  Tensor out( shape );
  for( int n = 0; n < shape[0]; n++ )
  {
    std::copy_n( tensor.data() + ( static_cast<size_t>( n ) * total + begin ) * plane, count * plane,
                 out.data() + static_cast<size_t>( n ) * count * plane );
  }
  return out;
}

} // namespace cupart
