#![no_main]

use libfuzzer_sys::fuzz_target;

// Any accepted document must serialize canonically: reparsing gives the same
// document, and reserializing gives the same bytes.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(doc) = hubbard_forest::parse_document(s) else {
        return;
    };
    let text = hubbard_forest::serialize_document(&doc);
    let back = hubbard_forest::parse_document(&text).expect("canonical output reparses");
    assert_eq!(back, doc, "reparse changed the document");
    assert_eq!(
        hubbard_forest::serialize_document(&back),
        text,
        "serialization is not a fixed point"
    );
});
