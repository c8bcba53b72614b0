#![no_main]

use bicover::io::ResultFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rf) = ResultFile::parse(text) {
        assert_eq!(rf.disks.len(), 2);
        let _ = rf.disks();
        if rf.radius.is_finite() {
            let back = ResultFile::parse(&rf.to_json()).unwrap();
            assert_eq!(back.disks.len(), 2);
        }
    }
});
