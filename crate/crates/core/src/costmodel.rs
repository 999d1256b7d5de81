//! Convolution output geometry and multiply-accumulate counts.
//!
//! MACs count multiplies only; each also implies one addition, so FLOPs are
//! roughly twice the MAC count. Bias, activation and pooling are not
//! counted.
//!
//! For reference, a ResNet-50 stem (7×7, stride 2, 64 filters) on a 625×434
//! RGB input without padding produces a 310×214×64 map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConvLayerSpec {
    pub in_channels: usize,
    pub out_channels: usize,
    pub kernel: usize,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default)]
    pub padding: usize,
}

fn default_stride() -> usize {
    1
}

impl ConvLayerSpec {
    pub fn new(
        in_channels: usize,
        out_channels: usize,
        kernel: usize,
        stride: usize,
        padding: usize,
    ) -> Self {
        ConvLayerSpec {
            in_channels,
            out_channels,
            kernel,
            stride,
            padding,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.in_channels == 0 || self.out_channels == 0 {
            return Err(Error::Parameter("channel counts must be positive".into()));
        }
        if self.kernel == 0 {
            return Err(Error::Parameter("kernel size must be positive".into()));
        }
        if self.stride == 0 {
            return Err(Error::Parameter("stride must be at least 1".into()));
        }
        Ok(())
    }
}

/// `floor((in + 2P − K) / S) + 1` on each axis.
pub fn conv_out_dims(in_h: usize, in_w: usize, spec: &ConvLayerSpec) -> Result<(usize, usize)> {
    spec.check()?;
    let axis = |n: usize, name: &str| {
        let padded = n + 2 * spec.padding;
        if padded < spec.kernel {
            return Err(Error::Geometry(format!(
                "kernel {} exceeds padded input {name} {padded} ({n} + 2·{})",
                spec.kernel, spec.padding
            )));
        }
        Ok((padded - spec.kernel) / spec.stride + 1)
    };
    Ok((axis(in_h, "height")?, axis(in_w, "width")?))
}

pub fn layer_macs(in_h: usize, in_w: usize, spec: &ConvLayerSpec) -> Result<u64> {
    let (oh, ow) = conv_out_dims(in_h, in_w, spec)?;
    Ok(oh as u64
        * ow as u64
        * spec.out_channels as u64
        * spec.in_channels as u64
        * (spec.kernel * spec.kernel) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerCost {
    pub out: [usize; 2],
    pub macs: u64,
}

/// Serializes as `{"input": [h, w, c], "layers": [{"out": [h, w], "macs": n}], "total_macs": n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub input: [usize; 3],
    pub layers: Vec<LayerCost>,
    pub total_macs: u64,
}

/// Chains layers from an `(h, w, c)` input. Each layer's `in_channels` must
/// match the channels flowing into it.
pub fn pipeline_cost(input: (usize, usize, usize), layers: &[ConvLayerSpec]) -> Result<CostReport> {
    let (mut h, mut w, mut c) = input;
    let mut out = Vec::with_capacity(layers.len());
    for (i, spec) in layers.iter().enumerate() {
        let layer_err = |e: Error| Error::Layer {
            layer: i,
            reason: match e {
                Error::Geometry(s) | Error::Parameter(s) => s,
                other => other.to_string(),
            },
        };
        if spec.in_channels != c {
            return Err(Error::Layer {
                layer: i,
                reason: format!("expects {} input channels, receives {c}", spec.in_channels),
            });
        }
        let (oh, ow) = conv_out_dims(h, w, spec).map_err(layer_err)?;
        let macs = layer_macs(h, w, spec).map_err(layer_err)?;
        out.push(LayerCost {
            out: [oh, ow],
            macs,
        });
        (h, w, c) = (oh, ow, spec.out_channels);
    }
    let total_macs = out.iter().map(|l| l.macs).sum();
    Ok(CostReport {
        input: [input.0, input.1, input.2],
        layers: out,
        total_macs,
    })
}

/// Layer stack file: either a bare JSON array of layers or `{"layers": [...]}`.
pub fn parse_layers(json: &str) -> serde_json::Result<Vec<ConvLayerSpec>> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Stack {
        Bare(Vec<ConvLayerSpec>),
        Wrapped { layers: Vec<ConvLayerSpec> },
    }
    Ok(match serde_json::from_str(json)? {
        Stack::Bare(v) | Stack::Wrapped { layers: v } => v,
    })
}
