use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use dsdl_core::resolve::{resolve_schema, ConcreteType, LibraryEnvironment};
use dsdl_core::syntax::{parse_document, ParseOptions};
use dsdl_core::validate::{validate_samples, Execution, ValidateOptions};
use dsdl_core::RawValue;

/// Detection samples with a few objects each, against the bundled template.
fn workload(n: usize) -> (ConcreteType, Vec<RawValue>) {
    let mut text = String::from(
        "$dsdl-version: \"0.5.0\"\n$import: [object-detection]\n\
         defs:\n  Dom:\n    $def: class_domain\n    classes: [a, b, c, d]\n\
         data:\n  sample-type: ObjectDetectionSample[cdom=Dom]\n  samples:\n",
    );
    for i in 0..n {
        text += &format!(
            "    - image: img/{i:06}.jpg\n      objects:\n\
             \x20       - {{bbox: [1, 2, 30, 40], label: a}}\n\
             \x20       - {{bbox: [5.5, 6, 7, 8], label: 3}}\n\
             \x20       - {{bbox: [0, 0, 1, 1], label: \"Dom::d\"}}\n"
        );
    }
    let doc = parse_document(&text, ParseOptions::default()).expect("workload parses");
    let (schema, diags) = resolve_schema(&doc, None, &LibraryEnvironment::standard(None, &[]), &[]);
    assert!(diags.is_empty(), "{diags:?}");
    let sample_type = schema.and_then(|s| s.sample_type).expect("sample type");
    let Some(RawValue::List(samples)) = doc.data.and_then(|d| d.samples) else {
        panic!("inline samples expected")
    };
    (sample_type, samples)
}

fn execution_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("validate_samples");
    for n in [1_000, 20_000] {
        let (t, samples) = workload(n);
        group.throughput(Throughput::Elements(n as u64));
        for (name, execution) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            let options = ValidateOptions {
                execution,
                ..Default::default()
            };
            group.bench_with_input(BenchmarkId::new(name, n), &samples, |b, samples| {
                b.iter(|| {
                    let mut diags = Vec::new();
                    let (typed, _) = validate_samples(samples, &t, options, &mut diags);
                    assert!(diags.is_empty());
                    typed
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, execution_modes);
criterion_main!(benches);
