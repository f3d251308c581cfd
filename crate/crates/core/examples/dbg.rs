use gaussian_metrology::optimize::*;
use gaussian_metrology::reservoir::*;
use gaussian_metrology::state::*;
use gaussian_metrology::qfi::*;

fn main() {
    let nbar = 50.0;
    let coeffs = derive_coeffs(&ReservoirSpec::squeezed(4.0));
    let profile = DissipationProfile::markovian(1.0).unwrap();
    let state = StateChoice::Fixed(StateParams::squeezed_vacuum(nbar));
    let opt = optimize_time_frequency(nbar, coeffs, &profile, 1e4, &state).unwrap();
    let t_opt = opt.t_opt.unwrap();
    println!("t_opt = {t_opt}, bound = {}", opt.bound);
    let st = build_state(&StateParams::squeezed_vacuum(nbar)).unwrap();
    for mult in [0.5, 0.9, 1.0, 1.1, 2.0] {
        let t = t_opt * mult;
        let ch = ChannelAtTime::at_omega_zero(&profile, t, coeffs, 0.0);
        let fphi = qfi_phase(&st, &ch, 0.0).unwrap().value;
        println!("t = {t:.6}: F_phi = {fphi:.6e}, t*F_phi = {:.9e}", t * fphi);
    }
}
