#include <iostream>

#include "igeo/report.hpp"

int main(int argc, char** argv) {
    using igeo::ErrorCode;
    try {
        const igeo::ParsedArgs args = igeo::parse_args(argc, argv);
        if (args.exit_requested) {
            (args.exit_code == 0 ? std::cout : std::cerr) << args.message;
            return args.exit_code;
        }
        const igeo::RunReport report = igeo::run(args.config);
        igeo::write_report(report, args.config);
        if (report.non_convergence) {
            std::cerr << "warning: a scan restart stopped before reaching the step floor\n";
            if (args.config.fail_on_nonconvergence) {
                return 4;
            }
        }
        return 0;
    } catch (const igeo::GeometryError& e) {
        std::cerr << "error (" << igeo::to_string(e.code()) << "): " << e.what() << '\n';
        return e.code() == ErrorCode::IoError ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
