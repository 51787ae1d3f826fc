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

/** \file     NnReference.hpp
    \brief    naive loop layer implementations and finite-difference gradient checks
*/

#pragma once

#include "cupart/CnnModel.hpp"
#include "cupart/NnLayers.hpp"
#include "cupart/Random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace cupart::reference
{

inline Tensor randomTensor( std::vector<int> shape, Rng& rng, double lo = -1.0, double hi = 1.0 )
{
  Tensor t( std::move( shape ) );
  for( auto& v: t.values() )
  {
    v = rng.uniform( lo, hi );
  }
  return t;
}

inline int samePad( int in, int kernel, int stride )
{
  const int out   = ( in + stride - 1 ) / stride;
  const int total = std::max( ( out - 1 ) * stride + kernel - in, 0 );
  return total / 2;
}

/// Six nested loops over (n, oc, oy, ox, ic, ky, kx).
inline Tensor naiveConv( const Tensor& x, const Tensor& w, const Tensor& b, int stride, bool same, bool relu )
{
  const int n = x.dim( 0 ), c = x.dim( 1 ), h = x.dim( 2 ), wd = x.dim( 3 );
  const int oc = w.dim( 0 ), kh = w.dim( 2 ), kw = w.dim( 3 );
  const int py = same ? samePad( h, kh, stride ) : 0, px = same ? samePad( wd, kw, stride ) : 0;
  const int oh = same ? ( h + stride - 1 ) / stride : ( h - kh ) / stride + 1;
  const int ow = same ? ( wd + stride - 1 ) / stride : ( wd - kw ) / stride + 1;
  Tensor    y( { n, oc, oh, ow } );
  for( int s = 0; s < n; s++ )
    for( int o = 0; o < oc; o++ )
      for( int oy = 0; oy < oh; oy++ )
        for( int ox = 0; ox < ow; ox++ )
        {
          double acc = b[o];
          for( int i = 0; i < c; i++ )
            for( int ky = 0; ky < kh; ky++ )
              for( int kx = 0; kx < kw; kx++ )
              {
                const int iy = oy * stride - py + ky, ix = ox * stride - px + kx;
                if( iy >= 0 && iy < h && ix >= 0 && ix < wd )
                {
                  acc += x[( ( s * c + i ) * h + iy ) * wd + ix] * w[( ( o * c + i ) * kh + ky ) * kw + kx];
                }
              }
          y[( ( s * oc + o ) * oh + oy ) * ow + ox] = relu ? std::max( acc, 0.0 ) : acc;
        }
  return y;
}

/// Max or mean over the in-bounds part of every window.
inline Tensor naivePool( const Tensor& x, int k, int stride, bool same, bool isMax )
{
  const int n = x.dim( 0 ), c = x.dim( 1 ), h = x.dim( 2 ), wd = x.dim( 3 );
  const int p  = same ? samePad( h, k, stride ) : 0;
  const int oh = same ? ( h + stride - 1 ) / stride : ( h - k ) / stride + 1;
  const int ow = same ? ( wd + stride - 1 ) / stride : ( wd - k ) / stride + 1;
  Tensor    y( { n, c, oh, ow } );
  for( int s = 0; s < n * c; s++ )
    for( int oy = 0; oy < oh; oy++ )
      for( int ox = 0; ox < ow; ox++ )
      {
        double best = -std::numeric_limits<double>::infinity(), sum = 0.0;
        int    cnt  = 0;
        for( int ky = 0; ky < k; ky++ )
          for( int kx = 0; kx < k; kx++ )
          {
            const int iy = oy * stride - p + ky, ix = ox * stride - p + kx;
            if( iy >= 0 && iy < h && ix >= 0 && ix < wd )
            {
              const double v = x[( s * h + iy ) * wd + ix];
              best           = std::max( best, v );
              sum += v;
              cnt++;
            }
          }
        y[( s * oh + oy ) * ow + ox] = isMax ? best : sum / cnt;
      }
  return y;
}

/// Inception block rebuilt from the layer's own parameters with the naive operators.
inline Tensor naiveInception( const Tensor& x, InceptionLayer& layer )
{
  auto conv = [&]( ConvLayer& l, const Tensor& in ) {
    return naiveConv( in, l.weights(), l.bias(), 1, true, true );
  };
  const Tensor a = conv( layer.branch1x1(), x );
  const Tensor b = conv( layer.branch3x3(), conv( layer.reduce3x3(), x ) );
  const Tensor c = conv( layer.branch5x5(), conv( layer.reduce5x5(), x ) );
  const Tensor d = conv( layer.poolProjection(), naivePool( x, 3, 1, true, true ) );
  const int    n = x.dim( 0 ), h = x.dim( 2 ), w = x.dim( 3 );
  const int    total = a.dim( 1 ) + b.dim( 1 ) + c.dim( 1 ) + d.dim( 1 );
  Tensor       y( { n, total, h, w } );
  for( int s = 0; s < n; s++ )
  {
    int base = 0;
    for( const Tensor* part: { &a, &b, &c, &d } )
    {
      for( int ch = 0; ch < part->dim( 1 ); ch++ )
        for( int i = 0; i < h * w; i++ )
        {
          y[( ( s * total ) + base + ch ) * h * w + i] = ( *part )[( s * part->dim( 1 ) + ch ) * h * w + i];
        }
      base += part->dim( 1 );
    }
  }
  return y;
}

inline double maxRelativeError( const Tensor& a, const Tensor& b )
{
  double worst = 0.0;
  for( size_t i = 0; i < a.size(); i++ )
  {
    const double scale = std::max( { std::fabs( a[i] ), std::fabs( b[i] ), 1e-12 } );
    worst              = std::max( worst, std::fabs( a[i] - b[i] ) / scale );
  }
  return worst;
}

/// Relative error used by the finite-difference checks; absolute below `floor`.
inline double gradError( double analytic, double numeric, double floor = 1e-6 )
{
  return std::fabs( analytic - numeric ) / std::max( { std::fabs( analytic ), std::fabs( numeric ), floor } );
}

struct GradCheckResult
{
  int    probes   = 0;
  int    skipped  = 0;
  double maxError = 0.0;
};

/// Central differences of `loss` w.r.t. randomly chosen entries of `target`, compared with `analytic`.
/// `pattern` reports the ReLU and max-pool switch state; probes that flip it are skipped and replaced.
inline GradCheckResult checkGradient( Tensor& target, const Tensor& analytic, const std::function<double()>& loss,
                                      const std::function<std::vector<uint8_t>()>& pattern, int probes, Rng& rng,
                                      double eps = 1e-4 )
{
  GradCheckResult result;
  const auto      base     = pattern();
  int             attempts = 0;
  while( result.probes < probes && attempts < probes * 20 )
  {
    attempts++;
    const size_t i    = rng.below( target.size() );
    const double keep = target[i];
    target[i]         = keep + eps;
    const double up   = loss();
    const bool   upOk = pattern() == base;
    target[i]         = keep - eps;
    const double down = loss();
    const bool   dnOk = pattern() == base;
    target[i]         = keep;
    if( !upOk || !dnOk )
    {
      result.skipped++;
      continue;
    }
    const double numeric = ( up - down ) / ( 2.0 * eps );
    result.maxError      = std::max( result.maxError, gradError( analytic[i], numeric ) );
    result.probes++;
  }
  return result;
}

} // namespace cupart::reference
