//! Runs every example's `run` as a test.

#[allow(dead_code)]
mod analyze_spectrum {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/analyze_spectrum.rs"));

    #[test]
    fn runs() {
        run().unwrap();
    }
}

#[allow(dead_code)]
mod spectral_map {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/spectral_map.rs"));

    #[test]
    fn runs() {
        run().unwrap();
    }
}

#[allow(dead_code)]
mod critical_values {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/critical_values.rs"));

    #[test]
    fn runs() {
        run().unwrap();
    }
}

#[allow(dead_code)]
mod hopf_prediction {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hopf_prediction.rs"));

    #[test]
    fn runs() {
        run().unwrap();
    }
}

#[allow(dead_code)]
mod simulate_network {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/simulate_network.rs"));

    #[test]
    fn runs() {
        run().unwrap();
    }
}

#[allow(dead_code)]
mod extract_profile {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/extract_profile.rs"));

    #[test]
    fn runs() {
        run().unwrap();
    }
}

#[allow(dead_code)]
mod amplitude_design {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/amplitude_design.rs"));

    #[test]
    fn runs() {
        run().unwrap();
    }
}

#[allow(dead_code)]
mod phase_design {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/phase_design.rs"));

    #[test]
    fn runs() {
        run().unwrap();
    }
}

#[allow(dead_code)]
mod verify_pipeline {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verify_pipeline.rs"));

    #[test]
    fn runs() {
        run().unwrap();
    }
}
